"""
Green Coalitions - Stability
Certificación de estabilidad de Nash y enumeración de particiones estables
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from ..core.constants import STABLE_SET_MAX_PLAYERS, StableSetStrategy
from ..core.errors import GameError
from .coalition import (
    EMPTY, Coalition, HistorySet, Partition, StepContext,
    all_partitions, join, shapley_payoffs
)
from .formation import Schedule, run_formation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StabilityReport:
    """
    Resultado de la comprobación.

    witness: (operador, coalición de destino sin él) que rompe la estabilidad
    """
    stable: bool
    witness: Optional[tuple[int, Coalition]] = None
    gain: float = 0.0

    def __bool__(self) -> bool:
        return self.stable


def is_nash_stable(
    partition: Partition,
    history: Optional[HistorySet],
    ctx: StepContext,
    history_free: bool = False
) -> StabilityReport:
    """
    Comprueba que ningún operador gana moviéndose de forma unilateral.

    Para cada i y cada S de la partición más ∅, exige que la coalición
    actual de i sea al menos tan buena como S ∪ {i}. Con historial, los
    destinos en h(i) valen -inf; history_free ignora el historial.

    Args:
        partition: Partición a certificar
        history: Historiales de la ejecución (None equivale a vacío)
        ctx: Contexto del paso
        history_free: Evaluar sin historial (diagnóstico)

    Returns:
        StabilityReport con un testigo si no es estable
    """
    if not partition.is_valid(ctx.ids):
        raise GameError(f"partición inválida para los operadores {ctx.ids}: {partition}")

    mask = None if history_free else history
    for member in ctx.ids:
        current = partition.coalition_of(member)
        payoff = shapley_payoffs(current, ctx)[member]

        targets = [c for c in partition.coalitions if c != current]
        if len(current) > 1:
            targets.append(EMPTY)

        for target in sorted(targets, key=lambda c: join(c, member)):
            if mask is not None and mask.contains(member, target):
                continue
            deviation = shapley_payoffs(join(target, member), ctx)[member]
            if deviation > payoff:
                return StabilityReport(False, (member, target), deviation - payoff)
    return StabilityReport(True)


def enumerate_stable_outcomes(
    ctx: StepContext,
    strategy: str = StableSetStrategy.SCHEDULES,
    seed: int = 0,
    execution_index: int = 0
) -> list[Partition]:
    """
    Particiones estables a las que puede llegar el juego del paso.

    - schedules: ejecuta el algoritmo con los N! órdenes de la primera ronda
    - exhaustive: comprueba las B_N particiones sin historial
    - single: solo el calendario sembrado

    Returns:
        Particiones distintas en orden canónico
    """
    ids = ctx.ids
    if strategy == StableSetStrategy.SINGLE:
        result = run_formation(ids, ctx, Schedule.seeded(ids, seed), execution_index)
        return [result.partition]

    if len(ids) > STABLE_SET_MAX_PLAYERS:
        raise GameError(
            f"enumeración de particiones estables limitada a {STABLE_SET_MAX_PLAYERS} operadores"
        )

    found: set[Partition] = set()
    if strategy == StableSetStrategy.SCHEDULES:
        for order in itertools.permutations(ids):
            result = run_formation(ids, ctx, Schedule(tuple(order)), execution_index)
            found.add(result.partition)
    elif strategy == StableSetStrategy.EXHAUSTIVE:
        for partition in all_partitions(ids):
            if is_nash_stable(partition, None, ctx, history_free=True):
                found.add(partition)
    else:
        raise GameError(f"estrategia desconocida: {strategy}")

    outcomes = sorted(found, key=lambda p: p.coalitions)
    logger.debug("Paso %d: %d particiones estables (%s)", execution_index, len(outcomes), strategy)
    return outcomes


def average_payoffs(partitions: Sequence[Partition], ctx: StepContext) -> dict[int, float]:
    """Pago medio de cada operador sobre varias particiones"""
    if not partitions:
        raise GameError("no hay particiones que promediar")
    totals = {i: 0.0 for i in ctx.ids}
    for partition in partitions:
        for coalition in partition.coalitions:
            for member, payoff in shapley_payoffs(coalition, ctx).items():
                totals[member] += payoff
    return {i: total / len(partitions) for i, total in totals.items()}
