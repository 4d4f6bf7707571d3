"""
Green Coalitions - Run Command
Simula un escenario completo (o un barrido de dt) y escribe los resultados
"""

import argparse
import logging
from pathlib import Path

from .base_command import BaseCommand
from ..core.constants import StableSetStrategy, RPMetric
from ..core.errors import ConfigError
from ..core.settings import ScenarioConfig, get_preset
from ..core.simulator import Simulator
from ..ui.report import format_summary

logger = logging.getLogger(__name__)


def parse_sweep(text: str) -> list[float]:
    """'1,2,4,6' -> [1.0, 2.0, 4.0, 6.0]"""
    try:
        values = [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise ConfigError(f"barrido de dt inválido: {text!r}") from None
    if not values or any(v <= 0 for v in values):
        raise ConfigError(f"barrido de dt inválido: {text!r}")
    return values


class RunCommand(BaseCommand):
    """
    Comando run: un escenario de principio a fin.
    """

    name = 'run'
    help = 'simula un escenario y escribe metrics.csv, steps.jsonl y shifts.jsonl'

    def add_arguments(self, parser: argparse.ArgumentParser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--config', type=Path, help='configuración JSON del escenario')
        source.add_argument('--preset', help="preset, p. ej. 'scenario-1-homogeneous'")
        parser.add_argument('--out', type=Path, required=True, help='directorio de salida')
        parser.add_argument('--seed', type=int, help='semilla (sustituye a seeds)')
        parser.add_argument('--dt', type=float, help='ancho de subintervalo en horas')
        parser.add_argument('--horizon', type=float, help='horizonte en horas')
        parser.add_argument('--rp-metric', choices=[RPMetric.RATIO_OF_SUMS, RPMetric.LITERAL])
        parser.add_argument(
            '--stable-set',
            choices=[StableSetStrategy.SCHEDULES, StableSetStrategy.EXHAUSTIVE, StableSetStrategy.SINGLE]
        )
        parser.add_argument('--workers', type=int, help='procesos para los pasos')
        parser.add_argument('--reuse-stable', action='store_true',
                            help='mantener la partición anterior si sigue siendo estable')
        parser.add_argument('--sweep', help="lista de dt, p. ej. '1,2,4,6'")

    def load_config(self, args: argparse.Namespace) -> ScenarioConfig:
        """Configuración del archivo o preset con los argumentos aplicados encima"""
        cfg = ScenarioConfig.load(args.config) if args.config else get_preset(args.preset)
        return cfg.with_overrides(
            seeds=[args.seed] if args.seed is not None else None,
            step_hours=args.dt,
            horizon_hours=args.horizon,
            rp_metric=args.rp_metric,
            stable_set_strategy=args.stable_set,
            workers=args.workers,
            reuse_stable_partition=True if args.reuse_stable else None,
        )

    def execute(self, args: argparse.Namespace) -> int:
        cfg = self.load_config(args)
        simulator = Simulator(cfg, args.out)

        if args.sweep:
            series = simulator.sweep(parse_sweep(args.sweep))
            for dt, metrics in series:
                print(f"dt = {dt:g} h")
                print(format_summary(metrics))
            return 0

        metrics = simulator.run()
        print(format_summary(metrics))
        return 0
