"""
Tests de las métricas RP, ON y XL
"""

import math

import pytest

from src.core.errors import DomainError, UndefinedBaselineError
from src.systems.metrics import Metrics, metric_on, metric_rp, metric_xl

BASELINES = [0.01 * (1 + k % 5) for k in range(168)]


class TestRP:

    def test_literal_identical_streams(self):
        assert metric_rp(BASELINES, BASELINES, literal=True) == pytest.approx(167.0)

    def test_identical_streams(self):
        assert metric_rp(BASELINES, BASELINES) == pytest.approx(0.0, abs=1e-12)

    def test_proportional_streams(self):
        payoffs = [1.1 * p for p in BASELINES]
        assert metric_rp(payoffs, BASELINES) == pytest.approx(0.10)

    def test_zero_baseline(self):
        with pytest.raises(UndefinedBaselineError) as err:
            metric_rp([0.1, 0.2], [0.0, 0.0])
        assert err.value.step is None

    def test_literal_zero_step_named(self):
        with pytest.raises(UndefinedBaselineError) as err:
            metric_rp([0.1, 0.2, 0.3], [0.1, 0.0, 0.3], literal=True)
        assert err.value.step == 1
        assert "paso 1" in str(err.value)

    def test_literal_skips_zero_steps(self):
        value = metric_rp([0.2, 5.0, 0.3], [0.1, 0.0, 0.3], literal=True, skip_undefined=True)
        assert value == pytest.approx(2.0 + 1.0 - 1.0)

    def test_lengths_must_match(self):
        with pytest.raises(DomainError):
            metric_rp([0.1], [0.1, 0.2])


class TestON:

    def test_all_on(self):
        assert metric_on([1] * 168) == 1.0

    def test_all_off(self):
        assert metric_on([0] * 168) == 0.0

    def test_quarter(self):
        assert metric_on([1] * 42 + [0] * 126) == pytest.approx(0.25)

    def test_empty(self):
        with pytest.raises(DomainError):
            metric_on([])


class TestXL:

    def test_identical(self):
        assert metric_xl([3, 4, 5], [3, 4, 5]) == 0.0

    def test_more_served_in_coalition(self):
        assert metric_xl([80, 80], [50, 50]) == pytest.approx(0.60)

    def test_station_always_off(self):
        assert metric_xl([0, 0, 0], [2, 3, 1]) == -1.0

    def test_undefined_baseline(self, caplog):
        assert math.isnan(metric_xl([1, 2], [0, 0]))
        assert "XL indefinido" in caplog.text


def test_metrics_rows():
    m = Metrics({2: 0.1, 1: 0.2}, {1: 0.5, 2: 1.0}, {1: 0.0, 2: -0.5})
    assert m.ids == [1, 2]
    assert m.rows() == [(1, 0.2, 0.5, 0.0), (2, 0.1, 1.0, -0.5)]
