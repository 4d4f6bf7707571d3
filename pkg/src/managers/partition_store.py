"""
Green Coalitions - Partition Store
Partición compartida entre agentes, con exclusión mutua y registro de desplazamientos
"""

import logging
import threading
from contextlib import contextmanager
from dataclasses import dataclass, asdict
from typing import Iterator, Optional

from ..core.errors import GameError
from ..systems.coalition import Coalition, HistorySet, Partition, join, leave

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShiftRecord:
    """
    Una transformación Pi_c -> Pi_{c+1} del algoritmo.

    Atributos:
        execution_index: Ejecución (paso) en la que ocurrió
        actor: Operador que se movió
        from_coalition: Coalición que abandona (con el actor)
        to_coalition: Coalición a la que llega (con el actor)
        payoff_before: Pago del actor antes del desplazamiento
        payoff_after: Pago del actor después
    """
    execution_index: int
    actor: int
    from_coalition: Coalition
    to_coalition: Coalition
    payoff_before: float
    payoff_after: float

    def to_dict(self) -> dict:
        data = asdict(self)
        data['from_coalition'] = list(self.from_coalition)
        data['to_coalition'] = list(self.to_coalition)
        return data


class PartitionStore:
    """
    Estado compartido de una ejecución: partición, historiales y registro.

    Toda lectura-modificación-escritura se hace dentro de transaction();
    ningún agente observa estados intermedios.
    """

    def __init__(self, ids: tuple[int, ...], execution_index: int = 0):
        """
        Inicializa el almacén con la partición de operadores solos.

        Args:
            ids: Operadores del juego
            execution_index: Índice de la ejecución (para el registro)
        """
        self.ids = tuple(sorted(ids))
        self.execution_index = execution_index

        self._lock = threading.Lock()
        self._partition = Partition.singletons(self.ids)
        self._history = HistorySet(self.ids)
        self._log: list[ShiftRecord] = []

    @contextmanager
    def transaction(self) -> Iterator['PartitionStore']:
        """Sección crítica: lock ... unlock"""
        with self._lock:
            yield self

    @property
    def partition(self) -> Partition:
        return self._partition

    @property
    def history(self) -> HistorySet:
        return self._history

    @property
    def shifts(self) -> list[ShiftRecord]:
        return list(self._log)

    @property
    def shift_count(self) -> int:
        return len(self._log)

    def apply_shift(
        self,
        actor: int,
        target: Coalition,
        payoff_before: float,
        payoff_after: float
    ) -> ShiftRecord:
        """
        Mueve al actor a target ∪ {actor} y anota S_cur ∖ {actor} en su historial.

        Debe llamarse dentro de transaction().

        Args:
            actor: Operador que se mueve
            target: Coalición de destino sin el actor (vacía para quedarse solo)
            payoff_before: Pago del actor en su coalición actual
            payoff_after: Pago del actor en la nueva coalición

        Returns:
            Registro del desplazamiento
        """
        current = self._partition.coalition_of(actor)
        updated = self._partition.shift(actor, target)
        if not updated.is_valid(self.ids):
            raise GameError(f"partición inválida tras mover el NO {actor}: {updated}")

        self._history.add(actor, leave(current, actor))
        self._partition = updated

        record = ShiftRecord(
            self.execution_index, actor, current, join(target, actor),
            payoff_before, payoff_after
        )
        self._log.append(record)
        logger.debug("NO %d: %s -> %s (%.6f -> %.6f)", actor,
                     record.from_coalition, record.to_coalition,
                     payoff_before, payoff_after)
        return record

    def reset(self, partition: Optional[Partition] = None):
        """Vuelve al estado inicial (o a la partición dada) y vacía historial y registro"""
        with self._lock:
            start = partition if partition is not None else Partition.singletons(self.ids)
            if not start.is_valid(self.ids):
                raise GameError(f"partición inicial inválida: {start}")
            self._partition = start
            self._history.reset()
            self._log.clear()
