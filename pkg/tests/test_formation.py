"""
Tests del algoritmo de formación de coaliciones
"""

import pytest

from src.core.errors import GameError
from src.managers.partition_store import PartitionStore
from src.systems.coalition import HistorySet, Partition, bell_number
from src.systems.formation import OperatorAgent, Schedule, run_formation, shift_search
from src.systems.stability import is_nash_stable
from tests.conftest import make_context, make_operator


def pair_context(cost_rate: float = 0.01):
    ops = [make_operator(1, cost_rate=cost_rate), make_operator(2, cost_rate=cost_rate)]
    return make_context(ops, {1: 1, 2: 1})


def mixed_context():
    ops = [
        make_operator(1), make_operator(2, price=0.24),
        make_operator(3, price=0.06), make_operator(4, capacity=50.0)
    ]
    return make_context(ops, {1: 6, 2: 2, 3: 9, 4: 3})


class TestSchedule:

    def test_round_robin(self):
        assert Schedule.round_robin([3, 1, 2]).order == (1, 2, 3)

    def test_seeded_is_reproducible_permutation(self):
        a = Schedule.seeded([1, 2, 3, 4, 5], seed=11)
        assert a == Schedule.seeded([5, 4, 3, 2, 1], seed=11)
        assert sorted(a.order) == [1, 2, 3, 4, 5]

    def test_schedule_must_cover_operators(self):
        with pytest.raises(GameError):
            run_formation((1, 2), pair_context(), Schedule((1,)))


class TestShiftSearch:

    def test_pair_joins(self):
        ctx = pair_context()
        assert shift_search(1, Partition.singletons([1, 2]), HistorySet([1, 2]), ctx) == (1, 2)

    def test_all_candidates_in_history(self):
        ctx = pair_context()
        history = HistorySet([1, 2])
        history.add(1, (2,))
        assert shift_search(1, Partition.singletons([1, 2]), history, ctx) == (1,)

    def test_leaving_alone_is_a_candidate(self):
        ctx = pair_context(cost_rate=1000.0)
        assert shift_search(1, Partition(((1, 2),)), HistorySet([1, 2]), ctx) == (1,)

    def test_ties_do_not_move(self):
        # Sin usuarios todas las coaliciones valen 0 salvo el coste de coalición
        ctx = make_context([make_operator(1, cost_rate=0.0), make_operator(2, cost_rate=0.0)], {})
        assert shift_search(1, Partition.singletons([1, 2]), HistorySet([1, 2]), ctx) == (1,)


class TestRunFormation:

    def test_single_operator(self):
        ctx = make_context([make_operator(1)], {1: 3})
        result = run_formation((1,), ctx)
        assert result.partition == Partition(((1,),))
        assert result.shifts == []
        assert result.rounds == 1

    def test_profitable_pair_merges(self):
        partition, shifts = run_formation((1, 2), pair_context())
        assert partition == Partition(((1, 2),))
        assert len(shifts) == 1
        record = shifts[0]
        assert record.actor == 1
        assert record.from_coalition == (1,)
        assert record.to_coalition == (1, 2)
        assert record.payoff_before == pytest.approx(0.0037048, abs=1e-9)
        assert record.payoff_after == pytest.approx(0.0267648, abs=1e-9)

    def test_prohibitive_coalition_cost(self):
        ops = [make_operator(i, cost_rate=1000.0) for i in (1, 2, 3)]
        ctx = make_context(ops, {1: 4, 2: 5, 3: 6})
        result = run_formation((1, 2, 3), ctx)
        assert result.partition == Partition.singletons([1, 2, 3])
        assert result.shifts == []

    @pytest.mark.parametrize('seed', [0, 1, 2, 3])
    def test_log_replays_to_final_partition(self, seed):
        ctx = mixed_context()
        ids = (1, 2, 3, 4)
        result = run_formation(ids, ctx, Schedule.seeded(ids, seed), execution_index=seed)

        assert len(result.shifts) <= bell_number(4)
        partition = Partition.singletons(ids)
        for record in result.shifts:
            assert record.execution_index == seed
            assert record.from_coalition == partition.coalition_of(record.actor)
            assert record.payoff_after > record.payoff_before
            partition = partition.shift(record.actor, tuple(
                m for m in record.to_coalition if m != record.actor
            ))
            assert partition.is_valid(ids)
        assert partition == result.partition

    @pytest.mark.parametrize('seed', [0, 5, 9])
    def test_terminal_partition_is_stable(self, seed):
        ctx = mixed_context()
        ids = (1, 2, 3, 4)
        result = run_formation(ids, ctx, Schedule.seeded(ids, seed))
        assert is_nash_stable(result.partition, result.history, ctx)

    def test_threaded_agents(self):
        ctx = mixed_context()
        result = run_formation((1, 2, 3, 4), ctx, workers=4)
        assert result.partition.is_valid((1, 2, 3, 4))
        assert is_nash_stable(result.partition, result.history, ctx)

    def test_history_records_abandoned_partners(self):
        result = run_formation((1, 2), pair_context())
        assert result.history.of(1) == frozenset({()})
        assert result.history.of(2) == frozenset()


class TestPartitionStore:

    def test_agent_moves_inside_store(self):
        ctx = pair_context()
        store = PartitionStore((1, 2))
        agent = OperatorAgent(1)
        record = agent.act(store, ctx)
        assert record is not None
        assert store.partition == Partition(((1, 2),))
        assert agent.moves == 1
        assert agent.act(store, ctx) is None
        assert agent.activations == 2

    def test_record_dict(self):
        store = PartitionStore((1, 2), execution_index=7)
        record = store.apply_shift(2, (1,), 0.1, 0.2)
        assert record.to_dict() == {
            'execution_index': 7, 'actor': 2, 'from_coalition': [2],
            'to_coalition': [1, 2], 'payoff_before': 0.1, 'payoff_after': 0.2
        }

    def test_reset(self):
        store = PartitionStore((1, 2))
        store.apply_shift(1, (2,), 0.0, 1.0)
        store.reset()
        assert store.partition == Partition.singletons([1, 2])
        assert store.shift_count == 0
        assert len(store.history) == 0

    def test_reset_rejects_invalid_partition(self):
        with pytest.raises(GameError):
            PartitionStore((1, 2)).reset(Partition(((1,),)))
