"""
Green Coalitions - Simulator
Bucle principal: una ejecución del algoritmo de formación por subintervalo
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .constants import (
    CONFIG_FILE, STEPS_FILE, EFFICIENCY_TOLERANCE,
    StableSetStrategy, RPMetric
)
from .errors import ConfigError, SimulationError
from .settings import ScenarioConfig
from ..entities.base_station import BaseStation
from ..entities.operator import NetworkOperator
from ..entities.user import UserClass, UserDemand, users_at
from ..managers.partition_store import ShiftRecord
from ..managers.profile_manager import get_profile_manager
from ..systems.coalition import (
    HistorySet, Partition, StepContext, coalition_value, shapley_payoffs
)
from ..systems.formation import Schedule, run_formation
from ..systems.metrics import Metrics, metric_on, metric_rp, metric_xl
from ..systems.stability import average_payoffs, enumerate_stable_outcomes, is_nash_stable
from ..systems.traces import LoadStats, StepLoad, discretize, step_count

logger = logging.getLogger(__name__)


# =============================================================================
# ESCENARIO PREPARADO Y POBLACIÓN DE CADA PASO
# =============================================================================

@dataclass
class Scenario:
    """
    Escenario listo para simular: operadores con su perfil y cargas escalonadas.
    """
    config: ScenarioConfig
    seed: int
    mix: tuple[UserClass, ...]
    operators: dict[int, NetworkOperator]
    step_loads: dict[int, StepLoad]
    profile_stats: dict[int, LoadStats]

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.operators))

    @property
    def steps(self) -> int:
        return step_count(self.config.horizon_hours, self.config.step_hours)


def prepare_scenario(cfg: ScenarioConfig, seed: int) -> Scenario:
    """
    Construye operadores, perfiles y cargas escalonadas de un escenario.

    Args:
        cfg: Configuración validada
        seed: Semilla de la réplica (fija los perfiles sintéticos sin profile_seed)

    Returns:
        Scenario listo para run_scenario
    """
    cfg.validate()
    mix = cfg.mix_classes()
    manager = get_profile_manager()

    operators: dict[int, NetworkOperator] = {}
    step_loads: dict[int, StepLoad] = {}
    profile_stats: dict[int, LoadStats] = {}
    for spec, price in zip(cfg.operators, cfg.energy_prices):
        if spec.trace is not None:
            profile = manager.load_trace(cfg.trace_path(spec), cfg.period_hours)
        else:
            profile_seed = spec.profile_seed if spec.profile_seed is not None else seed * 1000 + spec.id
            profile = manager.synthetic(spec.target_mean, profile_seed, cfg.period_hours)

        station = BaseStation(spec.id, spec.capacity, spec.static_power, spec.per_user_power, price)
        operators[spec.id] = NetworkOperator(spec.id, station, mix, spec.coalition_cost_rate, profile)
        step_loads[spec.id] = discretize(profile, cfg.step_hours, cfg.horizon_hours)
        profile_stats[spec.id] = manager.get_stats(profile)

    return Scenario(cfg, seed, mix, operators, step_loads, profile_stats)


def split_counts(n: int, n_classes: int, offset: int) -> list[int]:
    """
    Reparte n usuarios entre clases a partes iguales; el resto va por turnos desde offset.
    """
    counts = [n // n_classes] * n_classes
    for k in range(n % n_classes):
        counts[(offset + k) % n_classes] += 1
    return counts


def class_offset(seed: int, step_index: int, operator_id: int, n_classes: int) -> int:
    """Clase por la que empieza el reparto por turnos (reproducible)"""
    if n_classes == 1:
        return 0
    rng = np.random.default_rng([seed, step_index, operator_id])
    return int(rng.integers(n_classes))


def build_users(
    owner: int,
    n: int,
    mix: Sequence[UserClass],
    offset: int
) -> tuple[UserDemand, ...]:
    """Usuarios del operador: la clase del j-ésimo es (offset + j) mod |mezcla|"""
    return tuple(UserDemand(owner, mix[(offset + j) % len(mix)]) for j in range(n))


def populate_step(scenario: Scenario, step_index: int, seed: int) -> StepContext:
    """
    Población del subintervalo: n_i = users_at(pico_i, M_i) usuarios por operador.

    Args:
        scenario: Escenario preparado
        step_index: Subintervalo k (0 <= k < A)
        seed: Semilla de la réplica

    Returns:
        StepContext con los usuarios del paso
    """
    if not 0 <= step_index < scenario.steps:
        raise SimulationError(f"paso {step_index} fuera de [0, {scenario.steps})")

    users: dict[int, tuple[UserDemand, ...]] = {}
    for i, operator in scenario.operators.items():
        n = users_at(scenario.step_loads[i].peak(step_index), operator.max_users)
        offset = class_offset(seed, step_index, i, len(scenario.mix))
        users[i] = build_users(i, n, scenario.mix, offset)
    return StepContext(dict(scenario.operators), users, scenario.config.tolerance)


# =============================================================================
# REGISTRO DE UN PASO
# =============================================================================

@dataclass
class StepRecord:
    """
    Resultado de un subintervalo.

    payoffs es la media sobre las particiones estables encontradas;
    partition es la representativa (calendario sembrado), de la que salen
    el encendido y los usuarios servidos.
    """
    step: int
    seed: int
    time_hours: float
    peaks: dict[int, float]
    users: dict[int, int]
    class_offsets: dict[int, int]
    partition: Partition
    history: HistorySet
    outcomes: list[Partition]
    payoffs: dict[int, float]
    representative_payoffs: dict[int, float]
    baselines: dict[int, float]
    on: dict[int, int]
    served: dict[int, int]
    baseline_on: dict[int, int]
    baseline_served: dict[int, int]
    shift_count: int = 0
    stable: bool = True
    stable_history_free: bool = True
    reused: bool = False
    shifts: list[ShiftRecord] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        def keyed(d: dict) -> dict:
            return {str(k): v for k, v in sorted(d.items())}

        return {
            'step': self.step,
            'seed': self.seed,
            'time_hours': self.time_hours,
            'peaks': keyed(self.peaks),
            'users': keyed(self.users),
            'class_offsets': keyed(self.class_offsets),
            'partition': self.partition.to_list(),
            'history': self.history.to_dict(),
            'outcomes': [p.to_list() for p in self.outcomes],
            'payoffs': keyed(self.payoffs),
            'representative_payoffs': keyed(self.representative_payoffs),
            'baselines': keyed(self.baselines),
            'on': keyed(self.on),
            'served': keyed(self.served),
            'baseline_on': keyed(self.baseline_on),
            'baseline_served': keyed(self.baseline_served),
            'shift_count': self.shift_count,
            'stable': self.stable,
            'stable_history_free': self.stable_history_free,
            'reused': self.reused,
        }


def _check_efficiency(partition: Partition, ctx: StepContext, step: int):
    for coalition in partition.coalitions:
        gap = sum(shapley_payoffs(coalition, ctx).values()) - coalition_value(coalition, ctx)
        if abs(gap) > EFFICIENCY_TOLERANCE:
            logger.warning("Paso %d: reparto de %s no eficiente (desvío %.3g)", step, coalition, gap)


def run_step(
    scenario: Scenario,
    step_index: int,
    seed: int,
    previous: Optional[Partition] = None
) -> StepRecord:
    """
    Simula un subintervalo: población, formación, certificado y contabilidad.

    Args:
        scenario: Escenario preparado
        step_index: Subintervalo k
        seed: Semilla de la réplica
        previous: Partición del paso anterior (solo con reuse_stable_partition)

    Returns:
        StepRecord del paso
    """
    cfg = scenario.config
    ctx = populate_step(scenario, step_index, seed)
    ids = scenario.ids

    baselines = {i: coalition_value((i,), ctx) for i in ids}
    baseline_on = {i: ctx.solution((i,)).on_flags[i] for i in ids}
    baseline_served = {i: ctx.solution((i,)).served_count(i) for i in ids}

    reused = False
    if previous is not None and is_nash_stable(previous, None, ctx, history_free=True):
        partition, history, shifts = previous, HistorySet(ids), []
        outcomes = [previous]
        reused = True
    else:
        result = run_formation(
            ids, ctx, Schedule.seeded(ids, [seed, step_index]),
            step_index, cfg.formation_workers
        )
        partition, history, shifts = result.partition, result.history, result.shifts
        if cfg.stable_set_strategy == StableSetStrategy.SINGLE:
            outcomes = [partition]
        else:
            outcomes = enumerate_stable_outcomes(ctx, cfg.stable_set_strategy, seed, step_index)
            if not outcomes:
                logger.warning("Paso %d: ninguna partición estable (%s); se usa la representativa",
                               step_index, cfg.stable_set_strategy)
                outcomes = [partition]

    _check_efficiency(partition, ctx, step_index)

    on: dict[int, int] = {}
    served: dict[int, int] = {}
    for coalition in partition.coalitions:
        solution = ctx.solution(coalition)
        for i in coalition:
            on[i] = solution.on_flags[i]
            served[i] = solution.served_count(i)

    stable = is_nash_stable(partition, history, ctx)
    if not stable:
        logger.warning("Paso %d: %s no es estable (testigo %s)", step_index, partition, stable.witness)

    return StepRecord(
        step=step_index,
        seed=seed,
        time_hours=step_index * cfg.step_hours,
        peaks={i: scenario.step_loads[i].peak(step_index) for i in ids},
        users={i: len(ctx.users[i]) for i in ids},
        class_offsets={i: class_offset(seed, step_index, i, len(scenario.mix)) for i in ids},
        partition=partition,
        history=history,
        outcomes=outcomes,
        payoffs=average_payoffs(outcomes, ctx),
        representative_payoffs={i: shapley_payoffs(partition.coalition_of(i), ctx)[i] for i in ids},
        baselines=baselines,
        on=on,
        served=served,
        baseline_on=baseline_on,
        baseline_served=baseline_served,
        shift_count=len(shifts),
        stable=stable.stable,
        stable_history_free=is_nash_stable(partition, None, ctx, history_free=True).stable,
        reused=reused,
        shifts=shifts,
    )


def _run_step_job(args: tuple) -> StepRecord:
    scenario, step_index, seed = args
    return run_step(scenario, step_index, seed)


# =============================================================================
# ESCENARIO COMPLETO
# =============================================================================

def compute_metrics(records: Sequence[StepRecord], ids: Sequence[int], rp_metric: str) -> Metrics:
    """
    Agrega los registros de los pasos en RP, ON y XL por operador.
    """
    metrics = Metrics()
    literal = rp_metric == RPMetric.LITERAL
    for i in ids:
        metrics.rp[i] = metric_rp(
            [r.payoffs[i] for r in records],
            [r.baselines[i] for r in records],
            literal=literal,
            skip_undefined=literal
        )
        metrics.on_ratio[i] = metric_on([r.on[i] for r in records])
        metrics.load_deviation[i] = metric_xl(
            [r.served[i] for r in records],
            [r.baseline_served[i] for r in records]
        )
    return metrics


@dataclass
class ScenarioResult:
    """Métricas y registros de una réplica"""
    seed: int
    metrics: Metrics
    records: list[StepRecord]
    profile_stats: dict[int, LoadStats]

    @property
    def shifts(self) -> list[ShiftRecord]:
        return [s for r in self.records for s in r.shifts]


def run_scenario(cfg: ScenarioConfig, seed: Optional[int] = None) -> ScenarioResult:
    """
    Simula el horizonte completo: una ejecución del algoritmo por subintervalo.

    Args:
        cfg: Configuración del escenario
        seed: Semilla de la réplica (por defecto la primera de cfg.seeds)

    Returns:
        ScenarioResult con métricas y registros por paso
    """
    seed = cfg.seeds[0] if seed is None else seed
    scenario = prepare_scenario(cfg, seed)
    n_steps = scenario.steps
    logger.info("Escenario %s (seed=%d): %d operadores, %d pasos de %g h",
                cfg.name, seed, len(scenario.ids), n_steps, cfg.step_hours)

    records: list[StepRecord] = []
    if cfg.workers > 1 and not cfg.reuse_stable_partition:
        jobs = [(scenario, k, seed) for k in range(n_steps)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for record in pool.map(_run_step_job, jobs):
                records.append(record)
                logger.info("Paso %d/%d: %s", record.step + 1, n_steps, record.partition)
    else:
        if cfg.workers > 1:
            logger.warning("reuse_stable_partition encadena los pasos; se ignora workers=%d", cfg.workers)
        previous: Optional[Partition] = None
        for k in range(n_steps):
            record = run_step(scenario, k, seed, previous)
            records.append(record)
            if cfg.reuse_stable_partition:
                previous = record.partition
            logger.info("Paso %d/%d: %s%s", k + 1, n_steps, record.partition,
                        " (reutilizada)" if record.reused else "")

    metrics = compute_metrics(records, scenario.ids, cfg.rp_metric)
    return ScenarioResult(seed, metrics, records, scenario.profile_stats)


class Simulator:
    """
    Orquesta las réplicas de un escenario y escribe sus resultados.
    """

    def __init__(self, config: ScenarioConfig, out_dir: Union[str, Path]):
        """
        Inicializa el simulador.

        Args:
            config: Configuración del escenario
            out_dir: Directorio de salida
        """
        self.config = config.validate()
        self.out_dir = Path(out_dir)
        self.results: list[ScenarioResult] = []

    def _seed_dir(self, seed: int) -> Path:
        if len(self.config.seeds) == 1:
            return self.out_dir
        return self.out_dir / f"seed-{seed}"

    def run(self) -> Metrics:
        """
        Ejecuta todas las semillas y guarda las salidas.

        Con varias semillas cada réplica va a su subdirectorio y el
        metrics.csv de la raíz promedia las métricas.

        Returns:
            Métricas (promediadas si hay varias semillas)
        """
        from ..ui.report import ReportWriter

        self.results = []
        for seed in self.config.seeds:
            result = run_scenario(self.config, seed)
            self.results.append(result)

            writer = ReportWriter(self._seed_dir(seed))
            self.config.with_overrides(seeds=[seed]).save(writer.out_dir / CONFIG_FILE)
            writer.write_metrics(result.metrics)
            writer.write_steps(result.records)
            writer.write_shifts(result.shifts)
            writer.write_profiles(result.profile_stats)

        metrics = average_metrics([r.metrics for r in self.results])
        if len(self.results) > 1:
            ReportWriter(self.out_dir).write_metrics(metrics)
        logger.info("Resultados escritos en %s", self.out_dir)
        return metrics

    def sweep(self, steps_hours: Sequence[float]) -> list[tuple[float, Metrics]]:
        """
        Repite el escenario para cada dt y escribe plotdata/rp_vs_dt.csv.

        Returns:
            Lista (dt, métricas promediadas sobre las semillas)
        """
        from ..ui.report import ReportWriter

        if not steps_hours:
            raise ConfigError("la lista de dt está vacía")

        series = []
        for dt in steps_hours:
            cfg = self.config.with_overrides(step_hours=dt)
            metrics = average_metrics([run_scenario(cfg, seed).metrics for seed in cfg.seeds])
            series.append((dt, metrics))
            logger.info("dt = %g h completado", dt)
        ReportWriter(self.out_dir).write_rp_series(series)
        return series


def average_metrics(all_metrics: Sequence[Metrics]) -> Metrics:
    """Media de las métricas de varias réplicas, operador a operador"""
    if len(all_metrics) == 1:
        return all_metrics[0]
    averaged = Metrics()
    for i in all_metrics[0].ids:
        averaged.rp[i] = sum(m.rp[i] for m in all_metrics) / len(all_metrics)
        averaged.on_ratio[i] = sum(m.on_ratio[i] for m in all_metrics) / len(all_metrics)
        averaged.load_deviation[i] = sum(m.load_deviation[i] for m in all_metrics) / len(all_metrics)
    return averaged


# =============================================================================
# RE-CERTIFICACIÓN DE REGISTROS
# =============================================================================

@dataclass(frozen=True)
class Certificate:
    """Comprobación de un paso registrado"""
    seed: int
    step: int
    stable: bool
    stable_history_free: bool
    witness: Optional[tuple[int, tuple[int, ...]]] = None


def certify_records(records_dir: Union[str, Path]) -> list[Certificate]:
    """
    Reconstruye cada paso registrado y vuelve a certificar su partición.

    Busca steps.jsonl en records_dir y en sus subdirectorios seed-*, cada
    uno junto a su config.json.

    Returns:
        Un certificado por paso
    """
    from ..ui.report import read_steps

    records_dir = Path(records_dir)
    run_dirs = [records_dir] if (records_dir / STEPS_FILE).exists() else sorted(
        p for p in records_dir.glob('seed-*') if (p / STEPS_FILE).exists()
    )
    if not run_dirs:
        raise ConfigError(f"no hay {STEPS_FILE} en {records_dir}")

    certificates = []
    for run_dir in run_dirs:
        cfg = ScenarioConfig.load(run_dir / CONFIG_FILE)
        scenarios: dict[int, Scenario] = {}
        for data in read_steps(run_dir / STEPS_FILE):
            seed = int(data['seed'])
            if seed not in scenarios:
                scenarios[seed] = prepare_scenario(cfg, seed)
            scenario = scenarios[seed]

            users = {
                i: build_users(i, int(data['users'][str(i)]), scenario.mix,
                               int(data['class_offsets'][str(i)]))
                for i in scenario.ids
            }
            ctx = StepContext(dict(scenario.operators), users, cfg.tolerance)
            partition = Partition(tuple(tuple(c) for c in data['partition']))
            history = HistorySet.from_dict(data['history'])

            report = is_nash_stable(partition, history, ctx)
            diagnostic = is_nash_stable(partition, None, ctx, history_free=True)
            certificates.append(Certificate(
                seed, int(data['step']), report.stable, diagnostic.stable, report.witness
            ))
    return certificates
