"""
Green Coalitions - User Entities
Clases de usuario, demandas y fórmulas de QoS y número de usuarios
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from ..core.errors import DomainError

if TYPE_CHECKING:
    from .base_station import BaseStation

MIX_TOLERANCE = 1e-9


@dataclass(frozen=True)
class UserClass:
    """
    Clase de usuario: tasa mínima requerida, ingreso y probabilidad en la mezcla.
    """
    name: str
    min_rate: float  # D (Mbps)
    revenue_rate: float  # R ($/hora)
    mix_probability: float = 1.0

    def __post_init__(self):
        if self.min_rate <= 0:
            raise DomainError(f"clase {self.name}: la tasa mínima debe ser positiva")
        if self.revenue_rate < 0:
            raise DomainError(f"clase {self.name}: ingreso negativo")
        if not 0.0 <= self.mix_probability <= 1.0:
            raise DomainError(f"clase {self.name}: probabilidad fuera de [0,1]")

    @property
    def weight(self) -> float:
        """Ingreso por Mbps servido (R/D), criterio del reparto voraz"""
        return self.revenue_rate / self.min_rate


@dataclass(frozen=True)
class UserDemand:
    """Usuario concreto de un operador en un subintervalo"""
    owner: int
    user_class: UserClass

    @property
    def min_rate(self) -> float:
        return self.user_class.min_rate

    @property
    def revenue_rate(self) -> float:
        return self.user_class.revenue_rate


def validate_mix(mix: Sequence[UserClass]):
    """Comprueba que la mezcla no esté vacía y que sus probabilidades sumen 1"""
    if not mix:
        raise DomainError("la mezcla de usuarios está vacía")
    total = sum(c.mix_probability for c in mix)
    if abs(total - 1.0) > MIX_TOLERANCE:
        raise DomainError(f"las probabilidades de la mezcla suman {total}, no 1")


def qos_penalty_rate(d: float, D: float, R: float) -> float:
    """
    Penalización por hora cuando el usuario recibe d < D: (1 - d/D) * R.

    Args:
        d: Tasa asignada (Mbps)
        D: Tasa mínima requerida (Mbps)
        R: Ingreso del usuario ($/hora)
    """
    if D <= 0:
        raise DomainError("la tasa requerida debe ser positiva")
    if d < 0 or d > D:
        raise DomainError(f"tasa asignada {d} fuera de [0, {D}]")
    return (1.0 - d / D) * R


def mean_rate(mix: Sequence[UserClass]) -> float:
    """Tasa media ponderada de la mezcla"""
    validate_mix(mix)
    return sum(c.mix_probability * c.min_rate for c in mix)


def max_users(bs: "BaseStation", mix: Sequence[UserClass]) -> int:
    """
    Número máximo de usuarios M = floor(C / D_media) servibles a tasa completa.

    Args:
        bs: BS cuya capacidad (Mbps) se reparte
        mix: Mezcla de clases de usuario
    """
    d_bar = mean_rate(mix)
    if d_bar <= 0:
        raise DomainError("la tasa media de la mezcla es nula")
    # La tolerancia absorbe el error de redondeo de cocientes exactos
    return int(math.floor(bs.capacity / d_bar + 1e-9))


def users_at(load: float, M: int) -> int:
    """
    Usuarios presentes con carga normalizada load: redondeo half-up de load*M.

    Args:
        load: Carga normalizada en [0, 1]
        M: Número máximo de usuarios
    """
    if not 0.0 <= load <= 1.0:
        raise DomainError(f"carga {load} fuera de [0, 1]")
    n = int(math.floor(load * M + 0.5 + 1e-9))
    return min(n, M)
