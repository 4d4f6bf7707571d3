"""
Green Coalitions - Report
Escritura de resultados: métricas, registros por paso, desplazamientos y series
"""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Iterable, Sequence, TYPE_CHECKING

from ..core.constants import (
    METRICS_FILE, STEPS_FILE, SHIFTS_FILE, PROFILES_FILE,
    PLOTDATA_DIR, RP_VS_DT_FILE
)
from ..managers.partition_store import ShiftRecord
from ..systems.metrics import Metrics

if TYPE_CHECKING:
    from ..core.simulator import StepRecord
    from ..systems.traces import LoadStats

logger = logging.getLogger(__name__)


def _fmt(value: float) -> str:
    """Formato estable para CSV (nan explícito)"""
    if math.isnan(value):
        return 'nan'
    return repr(float(value))


class ReportWriter:
    """
    Escribe los archivos de salida de una ejecución en un directorio.
    """

    def __init__(self, out_dir: Path):
        """
        Inicializa el escritor.

        Args:
            out_dir: Directorio de salida (se crea si no existe)
        """
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)

    def write_metrics(self, metrics: Metrics) -> Path:
        """metrics.csv: no,rp,on,xl"""
        path = self.out_dir / METRICS_FILE
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['no', 'rp', 'on', 'xl'])
            for no, rp, on, xl in metrics.rows():
                writer.writerow([no, _fmt(rp), _fmt(on), _fmt(xl)])
        return path

    def write_steps(self, records: Iterable['StepRecord']) -> Path:
        """steps.jsonl: un registro JSON por subintervalo"""
        path = self.out_dir / STEPS_FILE
        with open(path, 'w', encoding='utf-8') as f:
            for record in records:
                f.write(json.dumps(record.to_dict(), sort_keys=True) + '\n')
        return path

    def write_shifts(self, shifts: Iterable[ShiftRecord]) -> Path:
        """shifts.jsonl: un registro por transformación de la partición"""
        path = self.out_dir / SHIFTS_FILE
        with open(path, 'w', encoding='utf-8') as f:
            for shift in shifts:
                f.write(json.dumps(shift.to_dict(), sort_keys=True) + '\n')
        return path

    def write_profiles(self, profiles: dict[int, 'LoadStats']) -> Path:
        """profiles.csv: carga total (gamma) y media horaria de cada perfil"""
        path = self.out_dir / PROFILES_FILE
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['no', 'gamma', 'mean'])
            for no in sorted(profiles):
                writer.writerow([no, _fmt(profiles[no].total_load), _fmt(profiles[no].mean_hourly)])
        return path

    def write_rp_series(self, series: Sequence[tuple[float, Metrics]]) -> Path:
        """plotdata/rp_vs_dt.csv: RP de cada operador para cada dt"""
        plot_dir = self.out_dir / PLOTDATA_DIR
        plot_dir.mkdir(parents=True, exist_ok=True)
        path = plot_dir / RP_VS_DT_FILE
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['dt', 'no', 'rp'])
            for dt, metrics in series:
                for no in metrics.ids:
                    writer.writerow([f"{dt:g}", no, _fmt(metrics.rp[no])])
        logger.info("Serie RP-dt escrita en %s", path)
        return path


def read_metrics(path: Path) -> Metrics:
    """Lee un metrics.csv escrito por ReportWriter"""
    metrics = Metrics()
    with open(path, 'r', encoding='utf-8', newline='') as f:
        for row in csv.DictReader(f):
            no = int(row['no'])
            metrics.rp[no] = float(row['rp'])
            metrics.on_ratio[no] = float(row['on'])
            metrics.load_deviation[no] = float(row['xl'])
    return metrics


def read_steps(path: Path) -> list[dict]:
    """Lee los registros de steps.jsonl como diccionarios"""
    with open(path, 'r', encoding='utf-8') as f:
        return [json.loads(line) for line in f if line.strip()]


def format_summary(metrics: Metrics) -> str:
    """Tabla de texto con las métricas (para la consola)"""
    lines = [f"{'NO':>3}  {'RP':>10}  {'ON':>6}  {'XL':>8}"]
    for no, rp, on, xl in metrics.rows():
        lines.append(f"{no:>3}  {rp:>10.4f}  {on:>6.3f}  {xl:>8.4f}")
    return "\n".join(lines)
