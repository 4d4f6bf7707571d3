"""
Green Coalitions - Allocation Solver
Asignación óptima de usuarios a BSs con apagado de estaciones

Resuelve de forma exacta el MILP de la coalición: qué BSs se encienden,
a qué BS se asigna cada usuario y qué tasa recibe, minimizando el coste
de energía más las penalizaciones de QoS.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ..core.constants import (
    DEFAULT_TOLERANCE, MIN_TOLERANCE, MAX_TOLERANCE, FEASIBILITY_TOLERANCE,
    BRUTEFORCE_MAX_STATIONS, BRUTEFORCE_MAX_USERS, SolveStatus
)
from ..core.errors import AllocationError
from ..entities.base_station import BaseStation
from ..entities.operator import NetworkOperator
from ..entities.user import UserDemand

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AllocationInstance:
    """
    Instancia de asignación de una coalición.

    Atributos:
        stations: BSs de los miembros de la coalición
        users: Usuarios agregados de todos los miembros
    """
    stations: tuple[BaseStation, ...]
    users: tuple[UserDemand, ...]

    @property
    def big_U(self) -> int:
        """Número total de usuarios (U de la restricción de encendido)"""
        return len(self.users)


@dataclass
class AllocationSolution:
    """
    Solución de una instancia.

    on_flags: id de BS -> 0/1
    assignment: (id de BS, índice de usuario) -> 0/1 (solo se guardan los 1)
    rates: (id de BS, índice de usuario) -> tasa en Mbps
    status: siempre SolveStatus.OPTIMAL (las instancias mal formadas lanzan AllocationError)
    """
    objective: float
    on_flags: dict[int, int]
    assignment: dict[tuple[int, int], int] = field(default_factory=dict)
    rates: dict[tuple[int, int], float] = field(default_factory=dict)
    status: str = SolveStatus.OPTIMAL

    def station_of(self, user_index: int) -> Optional[int]:
        """BS a la que está asignado el usuario (None si nadie lo sirve)"""
        for (bs_id, j), flag in self.assignment.items():
            if j == user_index and flag:
                return bs_id
        return None

    def assigned_count(self, bs_id: int) -> int:
        """Usuarios asignados a la BS"""
        return sum(flag for (b, _), flag in self.assignment.items() if b == bs_id)

    def served_count(self, bs_id: int) -> int:
        """Usuarios asignados a la BS que reciben tasa positiva"""
        return sum(
            1 for (b, _), rate in self.rates.items()
            if b == bs_id and rate > FEASIBILITY_TOLERANCE
        )


def build_instance(
    coalition: Iterable[NetworkOperator],
    users: Sequence[UserDemand]
) -> AllocationInstance:
    """
    Construye la instancia de una coalición con sus BSs y sus usuarios agregados.

    Args:
        coalition: Operadores miembros
        users: Usuarios agregados (pueden estar vacíos)

    Returns:
        AllocationInstance con las BSs ordenadas por id
    """
    members = sorted(coalition, key=lambda no: no.id)
    if not members:
        raise AllocationError("la coalición está vacía")

    member_ids = {no.id for no in members}
    for user in users:
        if user.owner not in member_ids:
            raise AllocationError(
                f"el usuario del NO {user.owner} no pertenece a la coalición {sorted(member_ids)}"
            )

    return AllocationInstance(
        stations=tuple(no.base_station for no in members),
        users=tuple(users)
    )


# =============================================================================
# REPARTO VORAZ DE TASAS (asignación fija)
# =============================================================================

def greedy_rates(
    capacity: float,
    demands: Sequence[tuple[int, float, float]]
) -> dict[int, float]:
    """
    Reparte la capacidad entre los usuarios asignados a una BS.

    Ordena por R/D descendente (empates por índice) y concede
    min(D, capacidad residual) a cada uno.

    Args:
        capacity: Capacidad de la BS
        demands: Tuplas (índice, D, R)

    Returns:
        Diccionario índice -> tasa
    """
    residual = capacity
    rates = {}
    for index, D, R in sorted(demands, key=lambda t: (-t[2] / t[1], t[0])):
        grant = min(D, max(residual, 0.0))
        rates[index] = grant
        residual -= grant
    return rates


def _penalty(users: Sequence[UserDemand], rates: dict[int, float]) -> float:
    return sum(
        (1.0 - rates.get(j, 0.0) / users[j].min_rate) * users[j].revenue_rate
        for j in range(len(users))
    )


def evaluate_objective(
    inst: AllocationInstance,
    on_flags: dict[int, int],
    assignment: dict[tuple[int, int], int],
    rates: dict[tuple[int, int], float]
) -> float:
    """
    Coste por hora de una solución: energía de las BSs encendidas más penalizaciones.
    """
    cost = 0.0
    for bs in inst.stations:
        if on_flags.get(bs.id, 0):
            n = sum(flag for (b, _), flag in assignment.items() if b == bs.id)
            cost += bs.static_cost_rate + bs.per_user_cost_rate * n

    served = {}
    for (_, j), rate in rates.items():
        served[j] = served.get(j, 0.0) + rate
    return cost + _penalty(inst.users, served)


# =============================================================================
# SOLVER EXACTO
# =============================================================================

@dataclass(frozen=True)
class _ClassGroup:
    """Usuarios intercambiables (misma D y R)"""
    min_rate: float
    revenue_rate: float
    indices: tuple[int, ...]

    @property
    def weight(self) -> float:
        return self.revenue_rate / self.min_rate


def _group_classes(users: Sequence[UserDemand]) -> list[_ClassGroup]:
    groups: dict[tuple[float, float], list[int]] = {}
    for j, user in enumerate(users):
        groups.setdefault((user.min_rate, user.revenue_rate), []).append(j)
    result = [_ClassGroup(D, R, tuple(idx)) for (D, R), idx in groups.items()]
    result.sort(key=lambda g: (-g.weight, g.indices[0]))
    return result


def _served_value(
    classes: Sequence[_ClassGroup],
    counts: Sequence[int],
    capacity: float
) -> float:
    """Valor servido (ingreso recuperado) del reparto fraccional voraz"""
    residual = capacity
    value = 0.0
    for group, count in zip(classes, counts):
        if residual <= 0:
            break
        if count == 0:
            continue
        taken = min(count * group.min_rate, residual)
        value += group.weight * taken
        residual -= taken
    return value


def _station_signature(bs: BaseStation) -> tuple[float, float, float, float]:
    return (bs.capacity, bs.static_power, bs.per_user_power, bs.energy_price)


class _BranchAndBound:
    """
    Ramificación y acotación sobre cuántos usuarios de cada clase recibe cada BS
    de un conjunto de encendido fijo.

    La cota relaja la integralidad de u: los usuarios pendientes pueden
    repartirse entre las BSs restantes como si su capacidad fuera común.
    """

    def __init__(
        self,
        stations: Sequence[BaseStation],
        classes: Sequence[_ClassGroup],
        incumbent: float,
        slack: float
    ):
        # BSs idénticas contiguas para romper simetrías
        self.stations = sorted(stations, key=lambda bs: (_station_signature(bs), bs.id))
        self.classes = classes
        self.best_cost = incumbent
        self.best_plan: Optional[list[tuple[int, ...]]] = None
        self.slack = slack
        self.nodes = 0

        m = len(self.stations)
        self._same_as_previous = [
            k > 0 and _station_signature(self.stations[k]) == _station_signature(self.stations[k - 1])
            for k in range(m)
        ]
        self._suffix_capacity = [0.0] * (m + 1)
        self._suffix_min_cost = [float('inf')] * (m + 1)
        for k in range(m - 1, -1, -1):
            bs = self.stations[k]
            self._suffix_capacity[k] = self._suffix_capacity[k + 1] + bs.capacity
            self._suffix_min_cost[k] = min(self._suffix_min_cost[k + 1], bs.per_user_cost_rate)
        self._static = sum(bs.static_cost_rate for bs in self.stations)

    def station_cost(self, k: int, counts: Sequence[int]) -> float:
        bs = self.stations[k]
        revenue = sum(c * g.revenue_rate for c, g in zip(counts, self.classes))
        return (
            bs.per_user_cost_rate * sum(counts) + revenue
            - _served_value(self.classes, counts, bs.capacity)
        )

    def lower_bound(self, k: int, remaining: Sequence[int]) -> float:
        """Cota inferior del coste de repartir los usuarios restantes en las BSs k.."""
        n = sum(remaining)
        if n == 0:
            return 0.0
        revenue = sum(c * g.revenue_rate for c, g in zip(remaining, self.classes))
        return (
            n * self._suffix_min_cost[k] + revenue
            - _served_value(self.classes, remaining, self._suffix_capacity[k])
        )

    def greedy_plan(self, counts: Sequence[int]) -> list[tuple[int, ...]]:
        """Solución inicial: cada usuario a la BS con más capacidad residual"""
        m = len(self.stations)
        residual = [bs.capacity for bs in self.stations]
        plan = [[0] * len(self.classes) for _ in range(m)]
        for c, group in enumerate(self.classes):
            for _ in range(counts[c]):
                k = max(range(m), key=lambda s: (residual[s], -s))
                plan[k][c] += 1
                residual[k] -= min(group.min_rate, max(residual[k], 0.0))
        return [tuple(row) for row in plan]

    def plan_cost(self, plan: Sequence[Sequence[int]]) -> float:
        return self._static + sum(self.station_cost(k, x) for k, x in enumerate(plan))

    def solve(self, counts: tuple[int, ...]) -> tuple[float, Optional[list[tuple[int, ...]]]]:
        seed_plan = self.greedy_plan(counts)
        seed_cost = self.plan_cost(seed_plan)
        if seed_cost < self.best_cost - 1e-12:
            self.best_cost = seed_cost
            self.best_plan = seed_plan

        self._search(0, counts, self._static, [])
        logger.debug(
            "B&B con %d BSs: %d nodos, coste %.9f",
            len(self.stations), self.nodes, self.best_cost
        )
        return self.best_cost, self.best_plan

    def _search(self, k: int, remaining: tuple[int, ...], fixed: float, plan: list):
        self.nodes += 1
        m = len(self.stations)

        if k == m - 1:
            # La última BS recibe todos los usuarios pendientes
            if self._same_as_previous[k] and plan and remaining > plan[-1]:
                return
            cost = fixed + self.station_cost(k, remaining)
            if cost < self.best_cost - 1e-12:
                self.best_cost = cost
                self.best_plan = plan + [remaining]
            return

        children = []
        for x in itertools.product(*(range(r + 1) for r in remaining)):
            if self._same_as_previous[k] and plan and x > plan[-1]:
                continue
            rest = tuple(r - v for r, v in zip(remaining, x))
            base = fixed + self.station_cost(k, x)
            bound = base + self.lower_bound(k + 1, rest)
            if bound >= self.best_cost - self.slack:
                continue
            children.append((bound, x, rest, base))

        children.sort(key=lambda child: (child[0], tuple(-v for v in child[1])))
        for bound, x, rest, base in children:
            if bound >= self.best_cost - self.slack:
                continue
            self._search(k + 1, rest, base, plan + [x])


def _materialize(
    inst: AllocationInstance,
    classes: Sequence[_ClassGroup],
    on_stations: Sequence[BaseStation],
    plan: Optional[Sequence[Sequence[int]]]
) -> AllocationSolution:
    """Convierte conteos por clase en asignación y tasas concretas"""
    on_ids = {bs.id for bs in on_stations}
    on_flags = {bs.id: int(bs.id in on_ids) for bs in inst.stations}
    assignment: dict[tuple[int, int], int] = {}
    rates: dict[tuple[int, int], float] = {}

    if plan is not None:
        by_id = dict(zip((bs.id for bs in on_stations), plan))
        ordered = sorted(on_stations, key=lambda bs: bs.id)
        for c, group in enumerate(classes):
            pending = list(group.indices)
            for bs in ordered:
                take = by_id[bs.id][c]
                for j in pending[:take]:
                    assignment[(bs.id, j)] = 1
                pending = pending[take:]

        for bs in ordered:
            demands = [
                (j, inst.users[j].min_rate, inst.users[j].revenue_rate)
                for (b, j) in assignment if b == bs.id
            ]
            for j, rate in greedy_rates(bs.capacity, demands).items():
                rates[(bs.id, j)] = rate

    objective = evaluate_objective(inst, on_flags, assignment, rates)
    return AllocationSolution(objective, on_flags, assignment, rates)


def solve_exact(inst: AllocationInstance, tol: float = DEFAULT_TOLERANCE) -> AllocationSolution:
    """
    Resuelve la instancia de forma exacta.

    Enumera los 2^|S| conjuntos de BSs encendidas (ordenados por su cota y
    sin repetir conjuntos equivalentes de BSs idénticas) y, para cada uno,
    ramifica sobre la asignación de usuarios.

    Args:
        inst: Instancia a resolver
        tol: Tolerancia absoluta sobre el objetivo

    Returns:
        Solución óptima (siempre factible: apagar todo es admisible)
    """
    if not MIN_TOLERANCE <= tol <= MAX_TOLERANCE:
        raise AllocationError(f"tolerancia {tol} fuera de [{MIN_TOLERANCE}, {MAX_TOLERANCE}]")
    if not inst.stations:
        raise AllocationError("la instancia no tiene BSs")

    classes = _group_classes(inst.users)
    counts = tuple(len(g.indices) for g in classes)
    total_revenue = sum(u.revenue_rate for u in inst.users)
    n_users = len(inst.users)
    slack = tol * 1e-3

    # Todo apagado: nadie recibe servicio
    best_cost = total_revenue
    best_stations: list[BaseStation] = []
    best_plan: Optional[list[tuple[int, ...]]] = None

    candidates = []
    seen = set()
    m = len(inst.stations)
    for mask in range(1, 1 << m):
        on = [inst.stations[k] for k in range(m) if mask >> k & 1]
        signature = tuple(sorted(_station_signature(bs) for bs in on))
        if signature in seen:
            continue
        seen.add(signature)
        bound = (
            sum(bs.static_cost_rate for bs in on)
            + n_users * min(bs.per_user_cost_rate for bs in on)
            + total_revenue
            - _served_value(classes, counts, sum(bs.capacity for bs in on))
        )
        candidates.append((bound, len(on), mask, on))
    candidates.sort(key=lambda c: c[:3])

    for bound, _, mask, on in candidates:
        if bound >= best_cost - slack:
            break
        search = _BranchAndBound(on, classes, best_cost, slack)
        cost, plan = search.solve(counts)
        if plan is not None and cost < best_cost - 1e-12:
            best_cost = cost
            best_stations = search.stations
            best_plan = plan

    solution = _materialize(inst, classes, best_stations, best_plan)
    logger.debug("Q = %.9f con BSs encendidas %s", solution.objective,
                 [b for b, f in solution.on_flags.items() if f])
    return solution


# =============================================================================
# ORÁCULO POR FUERZA BRUTA
# =============================================================================

def solve_bruteforce(inst: AllocationInstance) -> AllocationSolution:
    """
    Enumera todos los conjuntos de encendido y todas las asignaciones.

    Para cada asignación fija las tasas salen del reparto voraz. Solo para
    instancias pequeñas; sirve de oráculo del solver exacto.
    """
    m, n = len(inst.stations), len(inst.users)
    if m > BRUTEFORCE_MAX_STATIONS or n > BRUTEFORCE_MAX_USERS:
        raise AllocationError(
            f"fuerza bruta limitada a {BRUTEFORCE_MAX_STATIONS} BSs y "
            f"{BRUTEFORCE_MAX_USERS} usuarios (recibidas {m} y {n})"
        )

    best: Optional[AllocationSolution] = None
    for mask in range(1 << m):
        on = [bs for k, bs in enumerate(inst.stations) if mask >> k & 1]
        on_flags = {bs.id: int(mask >> k & 1) for k, bs in enumerate(inst.stations)}

        if not on:
            layouts: Iterable[tuple] = [()] if n == 0 else [None]
        else:
            layouts = itertools.product(range(len(on)), repeat=n)

        for layout in layouts:
            assignment: dict[tuple[int, int], int] = {}
            rates: dict[tuple[int, int], float] = {}
            if layout:
                for j, k in enumerate(layout):
                    assignment[(on[k].id, j)] = 1
                for k, bs in enumerate(on):
                    demands = [
                        (j, inst.users[j].min_rate, inst.users[j].revenue_rate)
                        for j, s in enumerate(layout) if s == k
                    ]
                    for j, rate in greedy_rates(bs.capacity, demands).items():
                        rates[(bs.id, j)] = rate

            cost = evaluate_objective(inst, on_flags, assignment, rates)
            if best is None or cost < best.objective - 1e-12:
                best = AllocationSolution(cost, on_flags, assignment, rates)

    assert best is not None
    return best


# =============================================================================
# VALIDACIÓN
# =============================================================================

def validate(
    inst: AllocationInstance,
    sol: AllocationSolution,
    tol: float = FEASIBILITY_TOLERANCE
) -> list[str]:
    """
    Comprueba las restricciones del modelo sobre una solución.

    Returns:
        Lista de violaciones (vacía si la solución es admisible)
    """
    violations = []
    station_ids = {bs.id for bs in inst.stations}
    n = len(inst.users)

    for bs in inst.stations:
        if sol.on_flags.get(bs.id) not in (0, 1):
            violations.append(f"[binario] b de la BS {bs.id} no es binario")
    for (b, j), flag in sol.assignment.items():
        if b not in station_ids or not 0 <= j < n:
            violations.append(f"asignación ({b},{j}) fuera de la instancia")
        if flag not in (0, 1):
            violations.append(f"[binario] u[{b},{j}] no es binario")
    for (b, j), rate in sol.rates.items():
        if rate < -tol:
            violations.append(f"[tasa] tasa negativa en ({b},{j})")

    # capacidad de cada BS encendida
    for bs in inst.stations:
        load = sum(rate for (b, _), rate in sol.rates.items() if b == bs.id)
        if load > bs.capacity + tol:
            violations.append(f"[capacidad] la BS {bs.id} supera su capacidad: {load:.6f} > {bs.capacity}")

    # cada usuario en exactamente una BS (ninguna si todo está apagado)
    any_on = any(sol.on_flags.get(bs.id, 0) for bs in inst.stations)
    for j in range(n):
        hosts = sum(flag for (_, k), flag in sol.assignment.items() if k == j)
        expected = 1 if any_on else 0
        if hosts != expected:
            violations.append(f"[asignacion] el usuario {j} está asignado a {hosts} BSs")

    # solo las BSs encendidas sirven usuarios
    for (b, j), flag in sol.assignment.items():
        if flag and not sol.on_flags.get(b, 0):
            violations.append(f"[encendido] el usuario {j} está en la BS apagada {b}")

    # como mucho la tasa pedida, y solo desde la BS asignada
    for (b, j), rate in sol.rates.items():
        if not 0 <= j < n:
            continue
        bound = sol.assignment.get((b, j), 0) * inst.users[j].min_rate
        if rate > bound + tol:
            violations.append(f"[tasa] el usuario {j} recibe {rate:.6f} > {bound} en la BS {b}")

    if not violations:
        recomputed = evaluate_objective(inst, sol.on_flags, sol.assignment, sol.rates)
        if abs(recomputed - sol.objective) > tol:
            violations.append(
                f"objetivo declarado {sol.objective:.9f} distinto del real {recomputed:.9f}"
            )
    return violations
