"""
Green Coalitions - Traces
Trazas de tráfico, perfiles de carga periódicos y su discretización

Una traza normalizada se ajusta con un spline cúbico periódico; el perfil
resultante se discretiza tomando el pico de cada subintervalo de ancho dt.
"""

import csv
import io
import logging
import math
from dataclasses import dataclass
from typing import Optional, TextIO, Union

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.optimize import minimize_scalar

from ..core.constants import (
    WEEK_HOURS, DAY_HOURS, TRACE_RESOLUTION_HOURS, MIN_TRACE_SAMPLES,
    DENSE_GRID_HOURS, MAX_SUBINTERVALS, TRACE_HEADER,
    SYNTH_MAX_ATTEMPTS, SYNTH_MEAN_TOLERANCE, SYNTH_HARMONICS,
    SYNTH_PHASE_JITTER, SYNTH_WEEKEND_FACTOR
)
from ..core.errors import TraceError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoadTrace:
    """
    Muestras (hora, carga normalizada) de una traza periódica.
    """
    times: tuple[float, ...]
    loads: tuple[float, ...]
    period: float = WEEK_HOURS

    def __post_init__(self):
        if self.period <= 0:
            raise TraceError("el periodo debe ser positivo")
        if len(self.times) != len(self.loads):
            raise TraceError("tiempos y cargas de distinta longitud")
        if len(self.times) < MIN_TRACE_SAMPLES:
            raise TraceError(
                f"se necesitan al menos {MIN_TRACE_SAMPLES} muestras (hay {len(self.times)})"
            )
        previous = -math.inf
        for t, load in zip(self.times, self.loads):
            if not 0.0 <= load <= 1.0:
                raise TraceError(f"carga {load} fuera de [0, 1] en t={t}")
            if t < 0 or t >= self.period:
                raise TraceError(f"instante {t} fuera de [0, {self.period})")
            if t <= previous:
                raise TraceError(f"instantes no crecientes en t={t}")
            previous = t

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.times, self.loads))


@dataclass(frozen=True, eq=False)
class LoadProfile:
    """
    Perfil de carga l(t): spline cúbico periódico evaluado con recorte a [0, 1].
    """
    spline: CubicSpline
    period: float

    @property
    def origin(self) -> float:
        """Primer nudo del spline"""
        return float(self.spline.x[0])

    @property
    def coefficients(self) -> np.ndarray:
        """Coeficientes por tramo (4, n_tramos)"""
        return self.spline.c

    def raw(self, t):
        """Valor del spline sin recortar"""
        shifted = self.origin + np.mod(np.asarray(t, dtype=float) - self.origin, self.period)
        return self.spline(shifted)

    def __call__(self, t):
        values = np.clip(self.raw(t), 0.0, 1.0)
        return float(values) if np.ndim(values) == 0 else values


@dataclass(frozen=True)
class StepLoad:
    """
    Carga escalonada: pico del perfil en cada subintervalo [tau, tau + dt).
    """
    step: float
    peaks: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.peaks)

    def peak(self, index: int) -> float:
        return self.peaks[index]


@dataclass(frozen=True)
class LoadStats:
    """Carga total del periodo y carga horaria media"""
    total_load: float
    mean_hourly: float


# =============================================================================
# CSV
# =============================================================================

def parse_trace(text: Union[str, TextIO], period: float = WEEK_HOURS) -> LoadTrace:
    """
    Lee una traza en CSV (`time_hours,load`, comentarios con '#').

    Args:
        text: Contenido del CSV o flujo de texto
        period: Periodo de la traza en horas

    Returns:
        LoadTrace validada
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    times: list[float] = []
    loads: list[float] = []
    header_seen = False

    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        fields = [f.strip() for f in next(csv.reader([line]))]

        if not header_seen:
            if tuple(fields) != TRACE_HEADER:
                raise TraceError(f"cabecera esperada '{','.join(TRACE_HEADER)}'", lineno)
            header_seen = True
            continue

        if len(fields) != 2:
            raise TraceError(f"se esperaban 2 campos, hay {len(fields)}", lineno)
        try:
            t, load = float(fields[0]), float(fields[1])
        except ValueError:
            raise TraceError(f"valor no numérico: {line!r}", lineno) from None

        if not 0.0 <= load <= 1.0:
            raise TraceError(f"carga {load} fuera de [0, 1]", lineno)
        if not 0.0 <= t < period:
            raise TraceError(f"instante {t} fuera de [0, {period})", lineno)
        if times and t <= times[-1]:
            raise TraceError(f"instante {t} no posterior a {times[-1]}", lineno)
        times.append(t)
        loads.append(load)

    if not header_seen:
        raise TraceError("traza vacía")
    return LoadTrace(tuple(times), tuple(loads), period)


def format_trace(trace: LoadTrace) -> str:
    """Serializa una traza en el formato CSV de entrada"""
    out = io.StringIO()
    out.write(f"# periodo {trace.period:g} h\n")
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(TRACE_HEADER)
    for t, load in trace.samples:
        writer.writerow([f"{t:.6g}", f"{load:.9f}"])
    return out.getvalue()


# =============================================================================
# SPLINE Y DISCRETIZACIÓN
# =============================================================================

def fit_periodic_spline(trace: LoadTrace) -> LoadProfile:
    """
    Ajusta un spline cúbico periódico (C2) que interpola todas las muestras.
    """
    x = np.array(trace.times + (trace.times[0] + trace.period,), dtype=float)
    y = np.array(trace.loads + (trace.loads[0],), dtype=float)
    try:
        spline = CubicSpline(x, y, bc_type='periodic')
    except ValueError as e:
        raise TraceError(f"sistema del spline singular: {e}") from e
    return LoadProfile(spline, trace.period)


def step_count(period: float, step: float) -> int:
    """A = ceil(periodo / dt)"""
    if step <= 0:
        raise DomainError("el paso de discretización debe ser positivo")
    return int(math.ceil(period / step - 1e-9))


def _refine_peak(profile: LoadProfile, lo: float, hi: float) -> float:
    result = minimize_scalar(
        lambda t: -profile(t), bounds=(lo, hi), method='bounded',
        options={'xatol': 1e-9}
    )
    return -float(result.fun)


def discretize(
    profile: LoadProfile,
    step: float,
    horizon: Optional[float] = None
) -> StepLoad:
    """
    Discretiza el perfil en subintervalos de ancho step tomando el pico de cada uno.

    El pico se localiza en una rejilla densa (como mucho un minuto) y se
    refina alrededor de cada máximo local de la rejilla.

    Args:
        profile: Perfil de carga
        step: Ancho dt en horas
        horizon: Horizonte a cubrir (por defecto el periodo del perfil)

    Returns:
        StepLoad con ceil(horizonte / dt) picos
    """
    horizon = profile.period if horizon is None else horizon
    n = step_count(horizon, step)
    if n > MAX_SUBINTERVALS:
        raise DomainError(f"{n} subintervalos superan el máximo de {MAX_SUBINTERVALS}")

    peaks = []
    for k in range(n):
        a = k * step
        b = min((k + 1) * step, horizon)
        m = max(1, int(math.ceil((b - a) / DENSE_GRID_HOURS - 1e-9)))
        grid = np.linspace(a, b, m + 1)
        values = np.atleast_1d(profile(grid))
        peak = float(values.max())

        if peak < 1.0:
            spacing = (b - a) / m
            for i in range(len(values)):
                left = values[i - 1] if i > 0 else -np.inf
                right = values[i + 1] if i + 1 < len(values) else -np.inf
                is_local_max = (
                    values[i] >= left and values[i] >= right
                    and (values[i] > left or values[i] > right)
                )
                if is_local_max and values[i] >= peak - 1e-3:
                    lo = max(a, grid[i] - spacing)
                    hi = min(b, grid[i] + spacing)
                    if hi > lo:
                        peak = max(peak, _refine_peak(profile, lo, hi))
        peaks.append(min(peak, 1.0))

    return StepLoad(step, tuple(peaks))


def stats(profile: LoadProfile) -> LoadStats:
    """
    Carga total del periodo (integral de l(t)) y media horaria.

    Los tramos donde el recorte a [0, 1] está activo se integran por
    cuadratura adaptativa; el resto de forma analítica.
    """
    knots = profile.spline.x
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        samples = profile.raw(np.linspace(lo, hi, 33))
        if samples.min() < 0.0 or samples.max() > 1.0:
            value, _ = quad(profile, lo, hi, epsabs=1e-9, limit=200)
        else:
            value = float(profile.spline.integrate(lo, hi))
        total += value
    return LoadStats(total, total / profile.period)


# =============================================================================
# PERFILES SINTÉTICOS
# =============================================================================

def _diurnal_shape(rng: np.random.Generator, times: np.ndarray) -> np.ndarray:
    """Patrón diario: fundamental + dos armónicos con fase perturbada por día"""
    days = int(math.ceil(times[-1] / DAY_HOURS + 1e-9)) + 1
    peak_hour = 20.0 + rng.normal(0.0, 1.0)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=len(SYNTH_HARMONICS))
    phases[0] = 0.0
    jitter = rng.normal(0.0, SYNTH_PHASE_JITTER, size=(days, len(SYNTH_HARMONICS)))

    day_index = (times // DAY_HOURS).astype(int)
    shape = np.ones_like(times)
    for h, amplitude in enumerate(SYNTH_HARMONICS):
        angle = 2.0 * math.pi * (h + 1) * (times - peak_hour) / DAY_HOURS
        shape += amplitude * np.cos(angle + phases[h] + jitter[day_index, h])

    weekend = (day_index % 7) >= 5
    shape[weekend] *= SYNTH_WEEKEND_FACTOR
    return np.clip(shape, 0.05, None)


def synthesize_profile(
    target_mean: float,
    seed: int,
    period: float = WEEK_HOURS
) -> LoadProfile:
    """
    Genera un perfil sintético con carga horaria media target_mean.

    Muestrea cada media hora una suma de sinusoides diarias, reescala
    hasta que la media del spline ajustado cae dentro del 2% del objetivo.

    Args:
        target_mean: Carga media objetivo en (0, 1]
        seed: Semilla del generador
        period: Periodo en horas

    Returns:
        LoadProfile determinista para (target_mean, seed, period)
    """
    if not 0.0 < target_mean <= 1.0:
        raise DomainError(f"carga media objetivo {target_mean} fuera de (0, 1]")

    rng = np.random.default_rng(seed)
    times = np.arange(0.0, period, TRACE_RESOLUTION_HOURS)
    shape = _diurnal_shape(rng, times)
    scale = target_mean / float(shape.mean())

    for attempt in range(1, SYNTH_MAX_ATTEMPTS + 1):
        loads = np.clip(scale * shape, 0.0, 1.0)
        trace = LoadTrace(tuple(float(t) for t in times), tuple(float(v) for v in loads), period)
        profile = fit_periodic_spline(trace)
        mean = stats(profile).mean_hourly
        if abs(mean / target_mean - 1.0) <= SYNTH_MEAN_TOLERANCE / 2:
            logger.debug("Perfil sintético (seed=%d) en %d intentos: media %.4f",
                         seed, attempt, mean)
            return profile
        scale *= target_mean / mean

    raise DomainError(
        f"no se alcanza la carga media {target_mean} tras {SYNTH_MAX_ATTEMPTS} intentos"
    )


def synthesize_trace(target_mean: float, seed: int, period: float = WEEK_HOURS) -> LoadTrace:
    """Traza semihoraria muestreada del perfil sintético (para exportar a CSV)"""
    profile = synthesize_profile(target_mean, seed, period)
    times = np.arange(0.0, period, TRACE_RESOLUTION_HOURS)
    loads = np.atleast_1d(profile(times))
    return LoadTrace(tuple(float(t) for t in times), tuple(float(v) for v in loads), period)
