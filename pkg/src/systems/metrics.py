"""
Green Coalitions - Metrics
Incremento relativo de beneficio (RP), ratio de encendido (ON) y desviación de carga (XL)
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

from ..core.errors import DomainError, UndefinedBaselineError

logger = logging.getLogger(__name__)


@dataclass
class Metrics:
    """Métricas por operador sobre todo el horizonte"""
    rp: dict[int, float] = field(default_factory=dict)
    on_ratio: dict[int, float] = field(default_factory=dict)
    load_deviation: dict[int, float] = field(default_factory=dict)

    @property
    def ids(self) -> list[int]:
        return sorted(self.rp)

    def rows(self) -> list[tuple[int, float, float, float]]:
        """Filas (NO, RP, ON, XL) ordenadas por operador"""
        return [
            (i, self.rp[i], self.on_ratio[i], self.load_deviation[i])
            for i in self.ids
        ]


def _check_lengths(*series: Sequence) -> None:
    lengths = {len(s) for s in series}
    if len(lengths) > 1:
        raise DomainError(f"series de distinta longitud: {sorted(lengths)}")


def metric_rp(
    payoffs: Sequence[float],
    baselines: Sequence[float],
    literal: bool = False,
    skip_undefined: bool = False
) -> float:
    """
    Incremento relativo de beneficio de un operador.

    Por defecto sum(x) / sum(P) - 1. Con literal=True se suma el cociente
    de cada paso y se resta 1 al total.

    Args:
        payoffs: Pago x_i de cada paso
        baselines: Beneficio en solitario P_i de cada paso
        literal: Usar la suma de cocientes por paso
        skip_undefined: En la forma literal, omitir los pasos con P = 0

    Returns:
        RP del operador
    """
    _check_lengths(payoffs, baselines)
    if not literal:
        total_base = math.fsum(baselines)
        if total_base == 0.0:
            raise UndefinedBaselineError()
        return math.fsum(payoffs) / total_base - 1.0

    ratios = []
    for k, (x, p) in enumerate(zip(payoffs, baselines)):
        if p == 0.0:
            if skip_undefined:
                logger.debug("RP literal: paso %d omitido (P = 0)", k)
                continue
            raise UndefinedBaselineError(k)
        ratios.append(x / p)
    return math.fsum(ratios) - 1.0


def metric_on(flags: Sequence[int]) -> float:
    """Fracción de pasos con la BS encendida"""
    if not flags:
        raise DomainError("serie de encendido vacía")
    return sum(1 for f in flags if f) / len(flags)


def metric_xl(served: Sequence[int], baseline_served: Sequence[int]) -> float:
    """
    Desviación relativa de la carga servida: sum(servidos) / sum(en solitario) - 1.

    Returns:
        XL del operador (NaN si en solitario nunca sirve a nadie)
    """
    _check_lengths(served, baseline_served)
    total_base = sum(baseline_served)
    if total_base == 0:
        logger.warning("XL indefinido: la BS no sirve usuarios en solitario en todo el horizonte")
        return math.nan
    return sum(served) / total_base - 1.0
