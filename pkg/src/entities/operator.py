"""
Green Coalitions - Network Operator Entity
Operador de red con una sola BS, su mezcla de usuarios y su perfil de carga
"""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Sequence

from .base_station import BaseStation
from .user import UserClass, UserDemand, max_users
from ..core.errors import DomainError

if TYPE_CHECKING:
    from ..systems.traces import LoadProfile


@dataclass(frozen=True)
class NetworkOperator:
    """
    Jugador del juego: una BS, una mezcla de usuarios y un coste de coalición K.
    """
    id: int
    base_station: BaseStation
    user_mix: tuple[UserClass, ...]
    coalition_cost_rate: float = 0.0
    load_profile: Optional['LoadProfile'] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.base_station.id != self.id:
            raise DomainError(
                f"la BS {self.base_station.id} no pertenece al operador {self.id}"
            )
        if self.coalition_cost_rate < 0:
            raise DomainError(f"NO {self.id}: coste de coalición negativo")

    @property
    def max_users(self) -> int:
        """M del operador según su capacidad y su mezcla"""
        return max_users(self.base_station, self.user_mix)


def standalone_profit_rate(no: NetworkOperator, users: Sequence[UserDemand]) -> float:
    """
    Beneficio por hora del operador trabajando solo: v({i}) con K = 0.

    El operador elige de forma óptima encender o apagar su BS y las tasas
    de sus usuarios; es la referencia P_i del incremento relativo RP.

    Args:
        no: Operador
        users: Usuarios propios del paso

    Returns:
        Ingresos menos el coste mínimo (energía + penalizaciones), $/hora
    """
    from ..systems.allocation import build_instance, solve_exact

    for user in users:
        if user.owner != no.id:
            raise DomainError(f"usuario del NO {user.owner} no pertenece al NO {no.id}")

    instance = build_instance([no], users)
    solution = solve_exact(instance)
    revenue = sum(u.revenue_rate for u in users)
    return revenue - solution.objective
