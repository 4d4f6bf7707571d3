"""
Green Coalitions - Coalition Formation
Agentes que aplican la regla de desplazamiento hedónico sobre la partición compartida
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from ..core.constants import MAX_FORMATION_ROUNDS
from ..core.errors import GameError
from ..managers.partition_store import PartitionStore, ShiftRecord
from .coalition import (
    EMPTY, Coalition, HistorySet, Partition, StepContext,
    bell_number, join, leave, shapley_payoffs
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Schedule:
    """
    Orden de activación de los agentes en cada ronda (se repite en bucle).
    """
    order: tuple[int, ...]

    @classmethod
    def round_robin(cls, ids: Iterable[int]) -> 'Schedule':
        return cls(tuple(sorted(ids)))

    @classmethod
    def seeded(cls, ids: Iterable[int], seed: Union[int, Sequence[int]]) -> 'Schedule':
        """Permutación aleatoria reproducible de los operadores"""
        ordered = sorted(ids)
        rng = np.random.default_rng(seed)
        return cls(tuple(int(ordered[k]) for k in rng.permutation(len(ordered))))


@dataclass
class FormationResult:
    """Resultado de una ejecución del algoritmo"""
    partition: Partition
    shifts: list[ShiftRecord]
    history: HistorySet
    rounds: int

    def __iter__(self):
        # (partición final, registro de desplazamientos)
        return iter((self.partition, self.shifts))


def shift_search(
    member: int,
    partition: Partition,
    history: HistorySet,
    ctx: StepContext
) -> Coalition:
    """
    Busca la coalición a la que el operador prefiere moverse.

    Evalúa S ∪ {i} para cada coalición S de la partición distinta de la
    suya y para S = ∅, saltando las que estén en h(i). Solo una mejora
    estricta sobre el pago actual cuenta; entre empates gana la coalición
    canónicamente menor.

    Args:
        member: Operador activo
        partition: Partición actual
        history: Historiales de la ejecución
        ctx: Contexto del paso

    Returns:
        La mejor coalición candidata (con el operador), o la actual
    """
    current = partition.coalition_of(member)
    best = current
    best_payoff = shapley_payoffs(current, ctx)[member]

    targets = [c for c in partition.coalitions if c != current]
    if len(current) > 1:
        targets.append(EMPTY)

    for target in sorted(targets, key=lambda c: join(c, member)):
        if history.contains(member, target):
            continue
        candidate = join(target, member)
        payoff = shapley_payoffs(candidate, ctx)[member]
        if payoff > best_payoff:
            best, best_payoff = candidate, payoff
    return best


class OperatorAgent:
    """
    Agente de un operador: se activa, consulta la partición y decide si moverse.
    """

    def __init__(self, operator_id: int):
        """
        Inicializa el agente.

        Args:
            operator_id: Operador al que representa
        """
        self.id = operator_id

        # Contadores de la ejecución actual
        self.activations = 0
        self.moves = 0

    def act(self, store: PartitionStore, ctx: StepContext) -> Optional[ShiftRecord]:
        """
        Una activación: lock, búsqueda, desplazamiento si mejora, unlock.

        Args:
            store: Partición compartida
            ctx: Contexto del paso

        Returns:
            Registro del desplazamiento o None si no se movió
        """
        with store.transaction():
            self.activations += 1
            partition = store.partition
            current = partition.coalition_of(self.id)
            best = shift_search(self.id, partition, store.history, ctx)
            if best == current:
                return None

            before = shapley_payoffs(current, ctx)[self.id]
            after = shapley_payoffs(best, ctx)[self.id]
            self.moves += 1
            return store.apply_shift(self.id, leave(best, self.id), before, after)


def run_formation(
    ids: Sequence[int],
    ctx: StepContext,
    schedule: Optional[Schedule] = None,
    execution_index: int = 0,
    workers: int = 1
) -> FormationResult:
    """
    Ejecuta el algoritmo de formación desde la partición de operadores solos.

    Los agentes se activan ronda tras ronda según el calendario; la
    ejecución termina cuando una ronda completa no produce ningún
    desplazamiento. Con workers > 1 cada ronda se lanza en un pool de
    hilos y los agentes compiten por el lock de la partición.

    Args:
        ids: Operadores del juego
        ctx: Contexto del paso
        schedule: Orden de activación (por defecto, orden de id)
        execution_index: Índice de la ejecución para el registro
        workers: Hilos para las activaciones de una ronda

    Returns:
        FormationResult con la partición final, el registro y los historiales
    """
    ids = tuple(sorted(ids))
    schedule = schedule or Schedule.round_robin(ids)
    if sorted(schedule.order) != list(ids):
        raise GameError(f"el calendario {schedule.order} no cubre a los operadores {ids}")

    store = PartitionStore(ids, execution_index)
    agents = {i: OperatorAgent(i) for i in ids}
    rounds = 0

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while True:
            rounds += 1
            if rounds > MAX_FORMATION_ROUNDS:
                raise GameError(
                    f"sin convergencia tras {MAX_FORMATION_ROUNDS} rondas (ejecución {execution_index})"
                )
            if pool is None:
                moved = [agents[i].act(store, ctx) for i in schedule.order]
            else:
                futures = [pool.submit(agents[i].act, store, ctx) for i in schedule.order]
                moved = [f.result() for f in futures]
            if not any(moved):
                break
    finally:
        if pool is not None:
            pool.shutdown(wait=True)

    bound = bell_number(len(ids))
    if store.shift_count > bound:
        logger.warning("Ejecución %d: %d desplazamientos superan B_%d = %d",
                       execution_index, store.shift_count, len(ids), bound)

    logger.debug("Ejecución %d: %s tras %d desplazamientos en %d rondas (%d activaciones)",
                 execution_index, store.partition, store.shift_count, rounds,
                 sum(a.activations for a in agents.values()))
    return FormationResult(store.partition, store.shifts, store.history.copy(), rounds)
