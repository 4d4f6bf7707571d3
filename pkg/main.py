#!/usr/bin/env python3
"""
Green Coalitions - Cooperación entre operadores móviles
=======================================================

Simulador de coaliciones entre operadores que comparten estaciones base
para apagar celdas y ahorrar energía.

Ejecutar:
    python main.py run --preset scenario-1-homogeneous --out results/
    python main.py run --config escenario.json --out results/ --dt 2
    python main.py run --preset scenario-1-homogeneous --out results/ --sweep 1,2,4,6
    python main.py synth-traces --targets objetivos.csv --out traces/
    python main.py check-stability --records results/

Opciones globales:
    -v / --verbose: mensajes de depuración
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

# Asegurar que la raíz del proyecto está en el path
project_root = Path(__file__).parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

logger = logging.getLogger('green_coalitions')

EXIT_FAILURE = 1
EXIT_SIMULATION_ERROR = 2


def build_parser(commands) -> argparse.ArgumentParser:
    """Parser principal con un subparser por comando"""
    parser = argparse.ArgumentParser(
        prog='green-coalitions',
        description='Formación de coaliciones entre operadores móviles'
    )
    parser.add_argument('-v', '--verbose', action='store_true', help='mensajes de depuración')
    subparsers = parser.add_subparsers(dest='command_name', required=True)
    for command in commands:
        command.register(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Punto de entrada principal del simulador"""
    try:
        from src.commands.run_command import RunCommand
        from src.commands.synth_command import SynthTracesCommand
        from src.commands.check_command import CheckStabilityCommand
        from src.core.errors import SimulationError
    except ImportError as e:
        print(f"Error de importación: {e}")
        print("Asegúrate de haber instalado las dependencias:")
        print("    pip install -r requirements.txt")
        return EXIT_FAILURE

    parser = build_parser([RunCommand(), SynthTracesCommand(), CheckStabilityCommand()])
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s'
    )

    try:
        return args.command.execute(args)
    except SimulationError as e:
        logger.error("%s", e)
        return EXIT_SIMULATION_ERROR
    except Exception:
        logger.exception("Error inesperado")
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
