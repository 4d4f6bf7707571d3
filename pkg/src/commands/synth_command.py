"""
Green Coalitions - Synth Traces Command
Genera trazas sintéticas con una carga media dada
"""

import argparse
import csv
import logging
from pathlib import Path

from .base_command import BaseCommand
from ..core.constants import WEEK_HOURS
from ..core.errors import ConfigError
from ..systems.traces import fit_periodic_spline, format_trace, stats, synthesize_trace

logger = logging.getLogger(__name__)

STATS_FILE = 'stats.csv'


def read_targets(path: Path) -> list[tuple[str, float, int]]:
    """
    Lee el CSV de objetivos: name,target_mean[,seed].

    Returns:
        Lista (nombre, media objetivo, semilla); la semilla por defecto es la fila
    """
    if not path.exists():
        raise ConfigError(f"no se encontró el archivo de objetivos: {path}")
    targets = []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or not {'name', 'target_mean'} <= set(reader.fieldnames):
            raise ConfigError(f"{path.name}: cabecera esperada 'name,target_mean[,seed]'")
        for row_number, row in enumerate(reader, start=1):
            try:
                seed = int(row['seed']) if row.get('seed') else row_number
                targets.append((row['name'].strip(), float(row['target_mean']), seed))
            except ValueError as e:
                raise ConfigError(f"{path.name}, fila {row_number}: {e}") from e
    return targets


class SynthTracesCommand(BaseCommand):
    """
    Comando synth-traces: una traza CSV por objetivo más stats.csv.
    """

    name = 'synth-traces'
    help = 'genera trazas sintéticas ajustadas a una carga media'

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument('--out', type=Path, required=True, help='directorio de salida')
        parser.add_argument('--targets', type=Path, required=True,
                            help="CSV con columnas 'name,target_mean[,seed]'")
        parser.add_argument('--period', type=float, default=WEEK_HOURS, help='periodo en horas')

    def execute(self, args: argparse.Namespace) -> int:
        targets = read_targets(args.targets)
        args.out.mkdir(parents=True, exist_ok=True)

        rows = []
        for name, target_mean, seed in targets:
            trace = synthesize_trace(target_mean, seed, args.period)
            (args.out / f"{name}.csv").write_text(format_trace(trace), encoding='utf-8')
            summary = stats(fit_periodic_spline(trace))
            rows.append((name, summary.total_load, summary.mean_hourly))
            logger.info("Traza %s: media %.4f (objetivo %.4f)", name, summary.mean_hourly, target_mean)

        with open(args.out / STATS_FILE, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['name', 'gamma', 'mean'])
            for name, gamma, mean in rows:
                writer.writerow([name, repr(gamma), repr(mean)])

        print(f"{len(rows)} trazas escritas en {args.out}")
        return 0
