"""
Green Coalitions - Scenario Settings
Configuración de escenarios, persistencia en JSON y presets experimentales
"""

import itertools
import json
import logging
from pathlib import Path
from dataclasses import dataclass, field, asdict
from typing import Any, Optional, Union

from .constants import (
    BS_CAPACITY, BS_STATIC_POWER, BS_PER_USER_POWER, COALITION_COST_RATE,
    NUM_OPERATORS, ENERGY_PRICE_LO, ENERGY_PRICE_HI, PRICE_SCENARIOS,
    USER_CLASSES, UserMix, WEEK_HOURS, LOAD_TARGETS,
    DEFAULT_TOLERANCE, MIN_TOLERANCE, MAX_TOLERANCE,
    StableSetStrategy, RPMetric
)
from .errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass
class OperatorSpec:
    """
    Operador de un escenario.

    El perfil de carga sale de una traza CSV (trace) o de un perfil
    sintético de media target_mean; exactamente uno de los dos.
    """
    id: int
    capacity: float = BS_CAPACITY
    static_power: float = BS_STATIC_POWER
    per_user_power: float = BS_PER_USER_POWER
    coalition_cost_rate: float = COALITION_COST_RATE
    trace: Optional[str] = None
    target_mean: Optional[float] = None
    profile_seed: Optional[int] = None


@dataclass
class ScenarioConfig:
    """Configuración completa de un escenario"""
    name: str = 'scenario'
    operators: list[OperatorSpec] = field(default_factory=list)
    energy_prices: list[float] = field(default_factory=list)
    # Nombre de mezcla predefinida o lista de clases {name, min_rate, revenue_rate, mix_probability}
    user_mix: Union[str, list[dict[str, Any]]] = UserMix.HOMOGENEOUS
    step_hours: float = 1.0
    horizon_hours: float = WEEK_HOURS
    period_hours: float = WEEK_HOURS
    seeds: list[int] = field(default_factory=lambda: [1])
    stable_set_strategy: str = StableSetStrategy.SCHEDULES
    rp_metric: str = RPMetric.RATIO_OF_SUMS
    reuse_stable_partition: bool = False
    workers: int = 1
    formation_workers: int = 1
    tolerance: float = DEFAULT_TOLERANCE

    # Directorio contra el que se resuelven las trazas relativas
    _base_dir: Optional[Path] = field(default=None, repr=False, compare=False)

    def validate(self) -> 'ScenarioConfig':
        """
        Comprueba la coherencia del escenario.

        Returns:
            self, para encadenar
        """
        if not self.operators:
            raise ConfigError("el escenario no tiene operadores")
        ids = [spec.id for spec in self.operators]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"ids de operador repetidos: {ids}")
        if len(self.energy_prices) != len(self.operators):
            raise ConfigError(
                f"{len(self.energy_prices)} precios para {len(self.operators)} operadores"
            )
        if any(price <= 0 for price in self.energy_prices):
            raise ConfigError("los precios de energía deben ser positivos")

        for spec in self.operators:
            if (spec.trace is None) == (spec.target_mean is None):
                raise ConfigError(f"NO {spec.id}: indica 'trace' o 'target_mean' (solo uno)")
            if spec.target_mean is not None and not 0.0 < spec.target_mean <= 1.0:
                raise ConfigError(f"NO {spec.id}: target_mean fuera de (0, 1]")
            if spec.capacity <= 0:
                raise ConfigError(f"NO {spec.id}: capacidad no positiva")

        if self.step_hours <= 0 or self.horizon_hours <= 0 or self.period_hours <= 0:
            raise ConfigError("step_hours, horizon_hours y period_hours deben ser positivos")
        if not self.seeds:
            raise ConfigError("se necesita al menos una semilla")
        if self.stable_set_strategy not in (
            StableSetStrategy.SCHEDULES, StableSetStrategy.EXHAUSTIVE, StableSetStrategy.SINGLE
        ):
            raise ConfigError(f"stable_set_strategy desconocida: {self.stable_set_strategy}")
        if self.rp_metric not in (RPMetric.RATIO_OF_SUMS, RPMetric.LITERAL):
            raise ConfigError(f"rp_metric desconocida: {self.rp_metric}")
        if self.workers < 1 or self.formation_workers < 1:
            raise ConfigError("workers y formation_workers deben ser >= 1")
        if not MIN_TOLERANCE <= self.tolerance <= MAX_TOLERANCE:
            raise ConfigError(f"tolerancia {self.tolerance} fuera de [{MIN_TOLERANCE}, {MAX_TOLERANCE}]")

        self.mix_classes()
        return self

    def mix_classes(self) -> tuple:
        """Clases de usuario de la mezcla, como tuplas de UserClass"""
        from ..entities.user import UserClass, validate_mix
        from .errors import DomainError

        try:
            if isinstance(self.user_mix, str):
                classes = mix_preset(self.user_mix)
            else:
                classes = tuple(UserClass(**entry) for entry in self.user_mix)
            validate_mix(classes)
        except (TypeError, DomainError) as e:
            raise ConfigError(f"mezcla de usuarios inválida: {e}") from e
        return classes

    def trace_path(self, spec: OperatorSpec) -> Path:
        """Ruta de la traza de un operador, relativa al archivo de configuración"""
        path = Path(spec.trace)
        if not path.is_absolute() and self._base_dir is not None:
            path = self._base_dir / path
        return path

    def to_dict(self) -> dict:
        data = asdict(self)
        data.pop('_base_dir')
        return data

    @classmethod
    def from_dict(cls, data: dict, base_dir: Optional[Path] = None) -> 'ScenarioConfig':
        """
        Construye la configuración desde un documento JSON ya decodificado.

        Args:
            data: Diccionario con los campos de ScenarioConfig
            base_dir: Directorio para resolver trazas relativas
        """
        try:
            known = {k: v for k, v in data.items() if not k.startswith('_')}
            unknown = set(known) - {f for f in cls.__dataclass_fields__ if not f.startswith('_')}
            if unknown:
                raise ConfigError(f"campos desconocidos: {sorted(unknown)}")
            operators = [OperatorSpec(**spec) for spec in known.pop('operators', [])]
            config = cls(operators=operators, **known)
        except TypeError as e:
            raise ConfigError(f"configuración mal formada: {e}") from e
        config._base_dir = base_dir
        return config.validate()

    def save(self, path: Union[str, Path]) -> Path:
        """
        Guarda la configuración en un archivo JSON.

        Returns:
            Ruta escrita
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2)
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'ScenarioConfig':
        """
        Carga la configuración desde un archivo JSON.

        Raises:
            ConfigError si el archivo no existe o no es válido
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"no se encontró la configuración: {path}")
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path.name}: JSON inválido ({e})") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path.name}: se esperaba un objeto JSON")
        logger.debug("Configuración cargada desde %s", path)
        return cls.from_dict(data, base_dir=path.parent)

    def with_overrides(self, **overrides) -> 'ScenarioConfig':
        """Copia con los campos indicados sustituidos (los None se ignoran)"""
        data = self.to_dict()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return ScenarioConfig.from_dict(data, base_dir=self._base_dir)


# =============================================================================
# PRESETS
# =============================================================================

def mix_preset(name: str) -> tuple:
    """
    Mezcla predefinida: solo Premium, o las tres clases a partes iguales.
    """
    from ..entities.user import UserClass

    if name == UserMix.HOMOGENEOUS:
        label, D, R = USER_CLASSES['premium']
        return (UserClass(label, D, R, 1.0),)
    if name == UserMix.HETEROGENEOUS:
        keys = ('base', 'standard', 'premium')
        return tuple(UserClass(*USER_CLASSES[k], 1.0 / len(keys)) for k in keys)
    raise ConfigError(f"mezcla desconocida: {name}")


def _synthetic_operators() -> list[OperatorSpec]:
    return [
        OperatorSpec(id=i + 1, target_mean=target)
        for i, target in enumerate(LOAD_TARGETS[:NUM_OPERATORS])
    ]


def scenario_preset(
    scenario: int,
    user_mix: str = UserMix.HOMOGENEOUS,
    step_hours: float = 1.0
) -> ScenarioConfig:
    """
    Escenario experimental de cinco operadores con perfiles sintéticos.

    Args:
        scenario: Fila de precios (1-4)
        user_mix: homogeneous o heterogeneous
        step_hours: Ancho de subintervalo dt
    """
    if scenario not in PRICE_SCENARIOS:
        raise ConfigError(f"escenario {scenario} desconocido (1-{len(PRICE_SCENARIOS)})")
    return ScenarioConfig(
        name=f"scenario-{scenario}-{user_mix}",
        operators=_synthetic_operators(),
        energy_prices=list(PRICE_SCENARIOS[scenario]),
        user_mix=user_mix,
        step_hours=step_hours
    ).validate()


def price_assignments(n: int = NUM_OPERATORS) -> list[tuple[float, ...]]:
    """Las 2^n asignaciones de E_lo / E_hi a los operadores (el bit k es el NO k+1)"""
    return [
        tuple(ENERGY_PRICE_HI if bits[k] else ENERGY_PRICE_LO for k in range(n))
        for bits in (
            tuple(mask >> k & 1 for k in range(n)) for mask in range(1 << n)
        )
    ]


def price_preset(mask: int, user_mix: str = UserMix.HOMOGENEOUS) -> ScenarioConfig:
    """Escenario con la asignación de precios número mask (0-31)"""
    assignments = price_assignments()
    if not 0 <= mask < len(assignments):
        raise ConfigError(f"asignación de precios {mask} fuera de [0, {len(assignments) - 1}]")
    return ScenarioConfig(
        name=f"prices-{mask:02d}-{user_mix}",
        operators=_synthetic_operators(),
        energy_prices=list(assignments[mask]),
        user_mix=user_mix
    ).validate()


def preset_names() -> list[str]:
    """Nombres aceptados por get_preset"""
    mixes = (UserMix.HOMOGENEOUS, UserMix.HETEROGENEOUS)
    names = [f"scenario-{s}-{m}" for s, m in itertools.product(PRICE_SCENARIOS, mixes)]
    names += [f"prices-{k:02d}-{m}" for k, m in itertools.product(range(1 << NUM_OPERATORS), mixes)]
    return names


def get_preset(name: str) -> ScenarioConfig:
    """
    Obtiene un preset por nombre ('scenario-1-homogeneous', 'prices-07-heterogeneous', ...).
    """
    parts = name.split('-')
    if len(parts) == 3 and parts[1].isdigit():
        kind, number, mix = parts
        if kind == 'scenario':
            return scenario_preset(int(number), mix)
        if kind == 'prices':
            return price_preset(int(number), mix)
    raise ConfigError(f"preset desconocido: {name}")
