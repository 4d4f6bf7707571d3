"""
Green Coalitions - Base Station Entity
Parámetros físicos y económicos de la celda de un operador
"""

from dataclasses import dataclass

from ..core.errors import DomainError


@dataclass(frozen=True)
class BaseStation:
    """
    Estación base con capacidad de bajada y curva de potencia afín.

    Atributos:
        id: Identificador (coincide con el del operador propietario)
        capacity: Capacidad máxima de bajada C (Mbps)
        static_power: Término estático alpha (kW)
        per_user_power: Término dinámico beta (kW por usuario)
        energy_price: Precio de la electricidad E ($/kWh)
    """
    id: int
    capacity: float
    static_power: float
    per_user_power: float
    energy_price: float

    def __post_init__(self):
        if self.capacity <= 0:
            raise DomainError(f"BS {self.id}: la capacidad debe ser positiva")
        if self.static_power < 0 or self.per_user_power < 0:
            raise DomainError(f"BS {self.id}: potencia negativa")
        if self.energy_price < 0:
            raise DomainError(f"BS {self.id}: precio de energía negativo")

    @property
    def static_cost_rate(self) -> float:
        """Coste por hora de mantener la BS encendida sin usuarios ($/hora)"""
        return self.static_power * self.energy_price

    @property
    def per_user_cost_rate(self) -> float:
        """Coste por hora de cada usuario asignado ($/hora)"""
        return self.per_user_power * self.energy_price


def power_draw(bs: BaseStation, n_users: int) -> float:
    """
    Potencia consumida por la BS con n usuarios: alpha + beta * n (kW).

    Args:
        bs: Estación base
        n_users: Número de usuarios servidos

    Returns:
        Potencia en kW
    """
    if n_users < 0:
        raise DomainError("el número de usuarios no puede ser negativo")
    return bs.static_power + bs.per_user_power * n_users
