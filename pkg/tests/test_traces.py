"""
Tests de trazas, spline periódico, discretización y perfiles sintéticos
"""

import math

import numpy as np
import pytest

from src.core.errors import DomainError, TraceError
from src.systems.traces import (
    LoadTrace, discretize, fit_periodic_spline, format_trace, parse_trace,
    stats, step_count, synthesize_profile, synthesize_trace
)


def sine_trace(period: float = 168.0, step: float = 0.5) -> LoadTrace:
    times = np.arange(0.0, period, step)
    loads = 0.5 + 0.4 * np.sin(2.0 * math.pi * times / 24.0)
    return LoadTrace(tuple(float(t) for t in times), tuple(float(v) for v in loads), period)


def constant_trace(value: float = 0.5, period: float = 168.0) -> LoadTrace:
    times = tuple(float(t) for t in range(0, int(period)))
    return LoadTrace(times, (value,) * len(times), period)


class TestParseTrace:

    def test_valid_csv_with_comments(self):
        text = (
            "# traza de prueba\n"
            "time_hours,load\n"
            "0,0.1\n"
            "\n"
            "6,0.4\n"
            "12,0.9\n"
            "# comentario intermedio\n"
            "18,0.3\n"
        )
        trace = parse_trace(text, period=24.0)
        assert trace.times == (0.0, 6.0, 12.0, 18.0)
        assert trace.loads == (0.1, 0.4, 0.9, 0.3)

    def test_missing_header(self):
        with pytest.raises(TraceError) as err:
            parse_trace("0,0.1\n1,0.2\n", period=24.0)
        assert err.value.line == 1

    def test_load_out_of_range_reports_line(self):
        text = "time_hours,load\n0,0.1\n1,1.5\n2,0.2\n3,0.2\n"
        with pytest.raises(TraceError) as err:
            parse_trace(text, period=24.0)
        assert err.value.line == 3
        assert "línea 3" in str(err.value)

    def test_non_increasing_times(self):
        text = "time_hours,load\n0,0.1\n2,0.2\n2,0.3\n5,0.2\n"
        with pytest.raises(TraceError) as err:
            parse_trace(text, period=24.0)
        assert err.value.line == 4

    def test_time_outside_period(self):
        text = "time_hours,load\n0,0.1\n1,0.2\n2,0.3\n24,0.2\n"
        with pytest.raises(TraceError):
            parse_trace(text, period=24.0)

    def test_non_numeric(self):
        with pytest.raises(TraceError):
            parse_trace("time_hours,load\n0,abc\n", period=24.0)

    def test_too_few_samples(self):
        with pytest.raises(TraceError):
            parse_trace("time_hours,load\n0,0.1\n1,0.2\n", period=24.0)

    def test_format_is_parseable(self):
        trace = sine_trace(period=24.0)
        again = parse_trace(format_trace(trace), period=24.0)
        assert again.times == pytest.approx(trace.times)
        assert again.loads == pytest.approx(trace.loads, abs=1e-9)


class TestPeriodicSpline:

    def test_interpolates_samples(self):
        trace = sine_trace()
        profile = fit_periodic_spline(trace)
        assert profile(np.array(trace.times)) == pytest.approx(np.array(trace.loads), abs=1e-9)

    def test_periodic(self):
        profile = fit_periodic_spline(sine_trace())
        for t in (0.0, 3.3, 50.25, 167.9):
            assert profile(t) == pytest.approx(profile(t + 168.0), abs=1e-9)

    @pytest.mark.parametrize('order', [1, 2])
    def test_derivatives_periodic(self, order):
        for profile in (fit_periodic_spline(sine_trace()), synthesize_profile(0.24, seed=5)):
            start = profile.spline(profile.origin, order)
            end = profile.spline(profile.origin + profile.period, order)
            assert float(start) == pytest.approx(float(end), abs=1e-6)

    def test_values_clamped(self):
        # Saltos bruscos provocan sobreoscilación del spline
        times = tuple(float(t) for t in range(0, 24, 2))
        loads = tuple(1.0 if (k // 3) % 2 else 0.0 for k in range(len(times)))
        profile = fit_periodic_spline(LoadTrace(times, loads, 24.0))
        grid = profile(np.linspace(0.0, 24.0, 2001))
        assert grid.min() >= 0.0
        assert grid.max() <= 1.0
        assert profile.raw(np.linspace(0.0, 24.0, 2001)).max() > 1.0

    def test_scalar_returns_float(self):
        profile = fit_periodic_spline(constant_trace())
        assert isinstance(profile(10.0), float)


class TestDiscretize:

    def test_step_count(self):
        assert step_count(168.0, 1.0) == 168
        assert step_count(168.0, 5.0) == 34
        assert step_count(168.0, 6.0) == 28

    def test_invalid_step(self):
        with pytest.raises(DomainError):
            step_count(168.0, 0.0)

    def test_constant_profile(self):
        steps = discretize(fit_periodic_spline(constant_trace(0.5)), 1.0)
        assert len(steps) == 168
        assert all(p == pytest.approx(0.5, abs=1e-9) for p in steps.peaks)

    def test_daily_peaks_of_sine(self):
        steps = discretize(fit_periodic_spline(sine_trace()), 24.0)
        assert len(steps) == 7
        for peak in steps.peaks:
            assert peak == pytest.approx(0.9, abs=1e-3)

    def test_peak_dominates_samples(self):
        profile = fit_periodic_spline(sine_trace())
        steps = discretize(profile, 2.0)
        for k, peak in enumerate(steps.peaks):
            grid = profile(np.linspace(2.0 * k, 2.0 * (k + 1), 50, endpoint=False))
            assert peak >= grid.max() - 1e-9

    @pytest.mark.parametrize('step', [12.0, 8.0, 6.0, 4.0, 2.0])
    def test_halving_step_tightens_envelope(self, step):
        profile = synthesize_profile(0.221, seed=11)
        coarse = sum(discretize(profile, step).peaks) * step
        fine = sum(discretize(profile, step / 2.0).peaks) * step / 2.0
        assert coarse >= fine - 1e-7
        assert fine >= stats(profile).total_load - 1e-6

    def test_horizon_shorter_than_period(self):
        steps = discretize(fit_periodic_spline(sine_trace()), 1.0, horizon=24.0)
        assert len(steps) == 24


class TestStats:

    def test_constant_profile(self):
        result = stats(fit_periodic_spline(constant_trace(0.5)))
        assert result.total_load == pytest.approx(84.0, abs=1e-6)
        assert result.mean_hourly == pytest.approx(0.5, abs=1e-9)

    def test_sine_profile_mean(self):
        result = stats(fit_periodic_spline(sine_trace()))
        assert result.mean_hourly == pytest.approx(0.5, abs=1e-4)


class TestSynthetic:

    @pytest.mark.parametrize('seed', range(20))
    @pytest.mark.parametrize('target', [0.143, 0.218, 0.221, 0.24, 0.316])
    def test_mean_within_tolerance(self, target, seed):
        profile = synthesize_profile(target, seed=seed)
        assert stats(profile).mean_hourly == pytest.approx(target, rel=0.02)

    def test_deterministic(self):
        a = synthesize_profile(0.24, seed=3)
        b = synthesize_profile(0.24, seed=3)
        assert np.array_equal(a.coefficients, b.coefficients)

    def test_seed_changes_shape(self):
        a = synthesize_profile(0.24, seed=3)
        b = synthesize_profile(0.24, seed=4)
        assert not np.array_equal(a.coefficients, b.coefficients)

    def test_invalid_target(self):
        with pytest.raises(DomainError):
            synthesize_profile(0.0, seed=1)

    def test_trace_sampling(self):
        trace = synthesize_trace(0.2, seed=1)
        assert len(trace.times) == 336
        assert all(0.0 <= v <= 1.0 for v in trace.loads)
