"""
Tests de estabilidad de Nash y de la enumeración de particiones estables
"""

import pytest

from src.core.constants import StableSetStrategy
from src.core.errors import GameError
from src.systems import coalition
from src.systems.coalition import HistorySet, Partition, all_partitions, bell_number
from src.systems.stability import average_payoffs, enumerate_stable_outcomes, is_nash_stable
from tests.conftest import make_context, make_operator

# Juego en el que el orden de activación decide el resultado
ORDER_DEPENDENT = {(1, 2): 10.0, (1, 3): 10.0}


@pytest.fixture
def order_dependent_game(monkeypatch):
    monkeypatch.setattr(coalition, 'coalition_value',
                        lambda s, ctx: ORDER_DEPENDENT.get(tuple(s), 0.0))
    return make_context([make_operator(i) for i in (1, 2, 3)], {})


def test_bell_numbers():
    assert [bell_number(n) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]


def test_all_partitions_are_distinct_and_valid():
    partitions = list(all_partitions((1, 2, 3, 4)))
    assert len(partitions) == 15
    assert len(set(partitions)) == 15
    assert all(p.is_valid((1, 2, 3, 4)) for p in partitions)


class TestNashStability:

    def test_single_operator(self):
        ctx = make_context([make_operator(1)], {1: 2})
        assert is_nash_stable(Partition(((1,),)), None, ctx)

    def test_profitable_pair_left_apart(self):
        ctx = make_context([make_operator(1), make_operator(2)], {1: 1, 2: 1})
        report = is_nash_stable(Partition.singletons([1, 2]), None, ctx)
        assert not report
        assert report.witness == (1, (2,))
        assert report.gain == pytest.approx(0.0267648 - 0.0037048, abs=1e-9)

    def test_history_masks_deviation(self):
        ctx = make_context([make_operator(1), make_operator(2)], {1: 1, 2: 1})
        history = HistorySet([1, 2])
        history.add(1, (2,))
        history.add(2, (1,))
        partition = Partition.singletons([1, 2])
        assert is_nash_stable(partition, history, ctx)
        assert not is_nash_stable(partition, history, ctx, history_free=True)

    def test_invalid_partition(self):
        ctx = make_context([make_operator(1), make_operator(2)], {})
        with pytest.raises(GameError):
            is_nash_stable(Partition(((1,),)), None, ctx)


class TestStableOutcomes:

    def test_symmetric_pair_has_one_outcome(self):
        ctx = make_context([make_operator(1), make_operator(2)], {1: 1, 2: 1})
        outcomes = enumerate_stable_outcomes(ctx)
        assert outcomes == [Partition(((1, 2),))]

    def test_order_dependent_game(self, order_dependent_game):
        ctx = order_dependent_game
        expected = [Partition(((1, 2), (3,))), Partition(((1, 3), (2,)))]
        assert enumerate_stable_outcomes(ctx, StableSetStrategy.SCHEDULES) == expected
        assert enumerate_stable_outcomes(ctx, StableSetStrategy.EXHAUSTIVE) == expected

    def test_average_over_outcomes(self, order_dependent_game):
        ctx = order_dependent_game
        outcomes = enumerate_stable_outcomes(ctx)
        payoffs = average_payoffs(outcomes, ctx)
        assert payoffs[1] == pytest.approx(5.0)
        assert payoffs[2] == pytest.approx(2.5)
        assert payoffs[3] == pytest.approx(2.5)

    def test_single_strategy(self, order_dependent_game):
        outcomes = enumerate_stable_outcomes(order_dependent_game, StableSetStrategy.SINGLE, seed=4)
        assert len(outcomes) == 1
        assert outcomes[0] in (Partition(((1, 2), (3,))), Partition(((1, 3), (2,))))

    def test_too_many_players(self):
        ctx = make_context([make_operator(i) for i in range(1, 8)], {})
        with pytest.raises(GameError):
            enumerate_stable_outcomes(ctx)

    def test_unknown_strategy(self):
        ctx = make_context([make_operator(1)], {})
        with pytest.raises(GameError):
            enumerate_stable_outcomes(ctx, 'random')

    def test_average_requires_partitions(self):
        with pytest.raises(GameError):
            average_payoffs([], make_context([make_operator(1)], {}))
