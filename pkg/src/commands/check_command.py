"""
Green Coalitions - Check Stability Command
Vuelve a certificar la estabilidad de las particiones registradas
"""

import argparse
import logging
from pathlib import Path

from .base_command import BaseCommand
from ..core.simulator import certify_records

logger = logging.getLogger(__name__)


class CheckStabilityCommand(BaseCommand):
    """
    Comando check-stability: falla si algún paso registrado no es estable.
    """

    name = 'check-stability'
    help = 'reconstruye cada paso registrado y comprueba la estabilidad de Nash'

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument('--records', type=Path, required=True,
                            help='directorio de salida de un run')

    def execute(self, args: argparse.Namespace) -> int:
        certificates = certify_records(args.records)
        failures = [c for c in certificates if not c.stable]
        history_free = sum(1 for c in certificates if c.stable_history_free)

        for c in failures:
            logger.error("seed %d, paso %d: no estable (testigo %s)", c.seed, c.step, c.witness)

        print(f"pasos comprobados: {len(certificates)}")
        print(f"estables con historial: {len(certificates) - len(failures)}")
        print(f"estables sin historial (diagnóstico): {history_free}")
        return 1 if failures else 0
