"""
Green Coalitions - Coalition Game
Juego de utilidad transferible entre operadores: valor, coste y reparto de Shapley

El valor de una coalición es lo que ingresan sus usuarios agregados menos
el coste mínimo de servirlos en sus BSs y menos el coste de coalición.
El reparto dentro de cada coalición sigue el valor de Aumann-Drèze.
"""

import itertools
import logging
import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from scipy.special import comb

from ..core.constants import DEFAULT_TOLERANCE, SHAPLEY_MAX_PLAYERS
from ..core.errors import GameError
from ..entities.operator import NetworkOperator
from ..entities.user import UserDemand
from .allocation import AllocationSolution, build_instance, solve_exact

logger = logging.getLogger(__name__)

# Coalición canónica: ids de operador ordenados y sin repetir
Coalition = tuple[int, ...]

PayoffVector = dict[int, float]

EMPTY: Coalition = ()


def make_coalition(members: Iterable[int]) -> Coalition:
    """Forma canónica de un conjunto de operadores"""
    return tuple(sorted(set(members)))


def join(coalition: Coalition, member: int) -> Coalition:
    """S ∪ {i}"""
    return make_coalition((*coalition, member))


def leave(coalition: Coalition, member: int) -> Coalition:
    """S ∖ {i}"""
    return tuple(m for m in coalition if m != member)


# =============================================================================
# PARTICIÓN E HISTORIAL
# =============================================================================

@dataclass(frozen=True)
class Partition:
    """
    Estructura de coaliciones disjuntas que cubre a todos los operadores.

    Las coaliciones se guardan ordenadas, de modo que dos particiones
    iguales tienen la misma representación.
    """
    coalitions: tuple[Coalition, ...]

    def __post_init__(self):
        canonical = tuple(sorted(make_coalition(c) for c in self.coalitions if c))
        object.__setattr__(self, 'coalitions', canonical)

    @classmethod
    def singletons(cls, ids: Iterable[int]) -> 'Partition':
        """Partición inicial: cada operador solo"""
        return cls(tuple((i,) for i in ids))

    @property
    def members(self) -> Coalition:
        return make_coalition(m for c in self.coalitions for m in c)

    def coalition_of(self, member: int) -> Coalition:
        """Coalición a la que pertenece el operador"""
        for c in self.coalitions:
            if member in c:
                return c
        raise GameError(f"el NO {member} no está en la partición")

    def shift(self, member: int, target: Coalition) -> 'Partition':
        """
        Aplica el desplazamiento de member a target ∪ {member}.

        Args:
            member: Operador que se mueve
            target: Coalición de destino sin el operador (vacía para quedarse solo)

        Returns:
            Nueva partición
        """
        current = self.coalition_of(member)
        rest = [c for c in self.coalitions if c not in (current, target)]
        rest.append(leave(current, member))
        rest.append(join(target, member))
        return Partition(tuple(rest))

    def is_valid(self, ids: Iterable[int]) -> bool:
        """Disjunta, sin coaliciones vacías y con unión igual a ids"""
        seen: list[int] = [m for c in self.coalitions for m in c]
        return (
            all(self.coalitions)
            and len(seen) == len(set(seen))
            and set(seen) == set(ids)
        )

    def to_list(self) -> list[list[int]]:
        return [list(c) for c in self.coalitions]

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, c)) + "}" for c in self.coalitions) + "}"


def bell_number(n: int) -> int:
    """Número de particiones de n elementos (triángulo de Bell)"""
    if n < 0:
        raise GameError("n debe ser no negativo")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


def all_partitions(ids: Sequence[int]) -> Iterator[Partition]:
    """Genera las B_N particiones de ids"""
    ids = make_coalition(ids)

    def _blocks(items: Coalition) -> Iterator[list[Coalition]]:
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for blocks in _blocks(rest):
            for k in range(len(blocks)):
                yield blocks[:k] + [join(blocks[k], first)] + blocks[k + 1:]
            yield blocks + [(first,)]

    for blocks in _blocks(ids):
        yield Partition(tuple(blocks))


class HistorySet:
    """
    Historial por operador de los compañeros ya evaluados h(i).

    Se guarda S_cur ∖ {i} al abandonar una coalición; un candidato
    S ∪ {i} queda vetado si S está en h(i).
    """

    def __init__(self, ids: Iterable[int] = ()):
        self._entries: dict[int, set[Coalition]] = {i: set() for i in ids}

    def add(self, member: int, partners: Coalition):
        self._entries.setdefault(member, set()).add(make_coalition(partners))

    def contains(self, member: int, partners: Coalition) -> bool:
        return make_coalition(partners) in self._entries.get(member, ())

    def of(self, member: int) -> frozenset[Coalition]:
        return frozenset(self._entries.get(member, ()))

    def reset(self):
        for entries in self._entries.values():
            entries.clear()

    def copy(self) -> 'HistorySet':
        clone = HistorySet()
        clone._entries = {i: set(s) for i, s in self._entries.items()}
        return clone

    def to_dict(self) -> dict[str, list[list[int]]]:
        return {
            str(i): [list(c) for c in sorted(entries)]
            for i, entries in sorted(self._entries.items())
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Sequence[Sequence[int]]]) -> 'HistorySet':
        history = cls()
        for key, entries in data.items():
            history._entries[int(key)] = {make_coalition(e) for e in entries}
        return history

    def __len__(self) -> int:
        return sum(len(s) for s in self._entries.values())


# =============================================================================
# CONTEXTO DE UN SUBINTERVALO
# =============================================================================

@dataclass
class StepContext:
    """
    Población de un subintervalo y cachés del juego.

    Los valores v(S) dependen de los usuarios del paso, por eso las cachés
    viven aquí y no en el operador.
    """
    operators: dict[int, NetworkOperator]
    users: dict[int, tuple[UserDemand, ...]]
    tolerance: float = DEFAULT_TOLERANCE
    _values: dict[Coalition, float] = field(default_factory=dict, repr=False)
    _solutions: dict[Coalition, AllocationSolution] = field(default_factory=dict, repr=False)
    _payoffs: dict[Coalition, PayoffVector] = field(default_factory=dict, repr=False)
    _cache_lock: threading.RLock = field(default_factory=threading.RLock, repr=False)

    def __post_init__(self):
        for i in self.operators:
            self.users.setdefault(i, ())
        unknown = set(self.users) - set(self.operators)
        if unknown:
            raise GameError(f"usuarios de operadores desconocidos: {sorted(unknown)}")

    @property
    def ids(self) -> Coalition:
        return make_coalition(self.operators)

    def users_of(self, coalition: Coalition) -> tuple[UserDemand, ...]:
        """U_S: usuarios agregados de los miembros, en orden de id"""
        return tuple(u for i in coalition for u in self.users[i])

    def solution(self, coalition: Coalition) -> AllocationSolution:
        """Asignación óptima de los usuarios agregados de la coalición"""
        coalition = make_coalition(coalition)
        with self._cache_lock:
            cached = self._solutions.get(coalition)
        if cached is not None:
            return cached
        for i in coalition:
            if i not in self.operators:
                raise GameError(f"el NO {i} no existe")
        instance = build_instance(
            [self.operators[i] for i in coalition], self.users_of(coalition)
        )
        solution = solve_exact(instance, self.tolerance)
        with self._cache_lock:
            self._solutions.setdefault(coalition, solution)
        return solution

    @property
    def cached_values(self) -> dict[Coalition, float]:
        with self._cache_lock:
            return dict(self._values)

    @property
    def cached_payoffs(self) -> dict[Coalition, PayoffVector]:
        with self._cache_lock:
            return {c: dict(p) for c, p in self._payoffs.items()}


# =============================================================================
# VALOR Y COSTE
# =============================================================================

def coalition_cost(coalition: Coalition, operators: Mapping[int, NetworkOperator]) -> float:
    """
    Coste de formar la coalición: 0 para un solo miembro, si no la suma de K_i.
    """
    if len(coalition) <= 1:
        return 0.0
    return sum(operators[i].coalition_cost_rate for i in coalition)


def coalition_value(coalition: Coalition, ctx: StepContext) -> float:
    """
    Beneficio neto por hora de la coalición: v(S) = R(U_S) - Q(U_S) - K(S).

    Args:
        coalition: Miembros
        ctx: Contexto del paso (se cachea el resultado)

    Returns:
        Valor en $/hora (0 para la coalición vacía)
    """
    coalition = make_coalition(coalition)
    if not coalition:
        return 0.0
    with ctx._cache_lock:
        cached = ctx._values.get(coalition)
    if cached is not None:
        return cached

    revenue = sum(u.revenue_rate for u in ctx.users_of(coalition))
    serving_cost = ctx.solution(coalition).objective
    value = revenue - serving_cost - coalition_cost(coalition, ctx.operators)

    with ctx._cache_lock:
        ctx._values.setdefault(coalition, value)
    logger.debug("v(%s) = %.9f", coalition, value)
    return value


# =============================================================================
# SHAPLEY / AUMANN-DRÈZE
# =============================================================================

def shapley_values(
    coalition: Coalition,
    value: Callable[[Coalition], float]
) -> PayoffVector:
    """
    Valor de Shapley del juego restringido a coalition por enumeración de subconjuntos.

    phi_i = sum_{T ⊆ S∖{i}} |T|!(|S|-|T|-1)!/|S|! * (v(T ∪ {i}) - v(T)), con v(∅) = 0.

    Args:
        coalition: Jugadores
        value: Función característica sobre coaliciones canónicas

    Returns:
        Pago de cada jugador
    """
    coalition = make_coalition(coalition)
    size = len(coalition)
    if size > SHAPLEY_MAX_PLAYERS:
        raise GameError(
            f"Shapley por enumeración limitado a {SHAPLEY_MAX_PLAYERS} jugadores (hay {size})"
        )
    if size == 0:
        return {}

    values: dict[Coalition, float] = {EMPTY: 0.0}
    for r in range(1, size + 1):
        for subset in itertools.combinations(coalition, r):
            values[subset] = value(subset)

    # 1 / (|S| * C(|S|-1, |T|)) es el peso de un subconjunto T de tamaño |T|
    weights = [1.0 / (size * comb(size - 1, t, exact=True)) for t in range(size)]

    payoffs: PayoffVector = {}
    for i in coalition:
        others = leave(coalition, i)
        total = 0.0
        for r in range(len(others) + 1):
            for subset in itertools.combinations(others, r):
                total += weights[r] * (values[join(subset, i)] - values[subset])
        payoffs[i] = total
    return payoffs


def shapley_by_orderings(
    coalition: Coalition,
    value: Callable[[Coalition], float]
) -> PayoffVector:
    """
    Shapley como media de las contribuciones marginales sobre todos los órdenes.

    Exponencial en el número de jugadores; se usa como oráculo.
    """
    coalition = make_coalition(coalition)
    if not coalition:
        return {}
    totals = {i: 0.0 for i in coalition}
    orders = 0
    for order in itertools.permutations(coalition):
        built: Coalition = EMPTY
        previous = 0.0
        for i in order:
            built = join(built, i)
            current = value(built) if built else 0.0
            totals[i] += current - previous
            previous = current
        orders += 1
    return {i: total / orders for i, total in totals.items()}


def shapley_payoffs(coalition: Coalition, ctx: StepContext) -> PayoffVector:
    """
    Reparto de Aumann-Drèze de v(S) entre los miembros de la coalición.

    Args:
        coalition: Coalición (como mucho SHAPLEY_MAX_PLAYERS miembros)
        ctx: Contexto del paso

    Returns:
        Pago por hora de cada miembro
    """
    coalition = make_coalition(coalition)
    with ctx._cache_lock:
        cached = ctx._payoffs.get(coalition)
    if cached is not None:
        return dict(cached)

    payoffs = shapley_values(coalition, lambda s: coalition_value(s, ctx))
    with ctx._cache_lock:
        ctx._payoffs.setdefault(coalition, payoffs)
    return dict(payoffs)


def payoff_of(member: int, partition: Partition, ctx: StepContext) -> float:
    """x_i: pago del operador en su coalición de la partición"""
    return shapley_payoffs(partition.coalition_of(member), ctx)[member]


# =============================================================================
# PREFERENCIAS
# =============================================================================

class Preference:
    FIRST = 'first'  # S1 estrictamente preferida
    SECOND = 'second'  # S2 igual o mejor


def utility(
    member: int,
    coalition: Coalition,
    history: Optional[HistorySet],
    ctx: StepContext
) -> float:
    """
    u_i(S): pago de Shapley, o -inf si los compañeros S ∖ {i} están en h(i).
    """
    if member not in coalition:
        raise GameError(f"el NO {member} no pertenece a {coalition}")
    if history is not None and history.contains(member, leave(coalition, member)):
        return -math.inf
    return shapley_payoffs(coalition, ctx)[member]


def prefers(
    member: int,
    first: Coalition,
    second: Coalition,
    history: Optional[HistorySet],
    ctx: StepContext
) -> str:
    """
    Compara dos coaliciones que contienen al operador.

    Returns:
        Preference.FIRST si first da un pago estrictamente mayor,
        Preference.SECOND en otro caso
    """
    first, second = make_coalition(first), make_coalition(second)
    if first == second:
        return Preference.SECOND
    if utility(member, first, history, ctx) > utility(member, second, history, ctx):
        return Preference.FIRST
    return Preference.SECOND
