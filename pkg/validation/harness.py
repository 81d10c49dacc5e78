"""
Validation runs for the built-in scenarios

Each scenario file carries a ``validation`` block whose ``type`` selects
one of the checks below. A check runs the scenario, compares the result
with its reference and returns a ValidationReport.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from scenarios.builder import BuiltScenario, build_scenario
from scenarios.config import ScenarioConfig
from scenarios.library import load_builtin
from scenarios.runner import ReferenceProfile, RunResult, ScenarioRunner
from solver.exceptions import ConfigurationError
from solver.particles import FLUID, FluidProperties
from solver.simulation import Simulation, StepReport

from .analytic import WomersleyParams, channel_poiseuille, womersley_velocity
from .metrics import ProfileSamples, filter_reference_samples, rmsep

logger = logging.getLogger(__name__)

PARABOLIC_FIT_MIN = 0.95
ANGLE_TOLERANCE = 1e-9


@dataclass
class MetricResult:
    name: str
    value: float
    threshold: Optional[float]
    passed: bool
    note: str = ''


@dataclass
class ValidationReport:
    """Outcome of one validation case"""

    case: str
    kind: str
    time: float
    metrics: List[MetricResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.metrics) and all(m.passed for m in self.metrics)

    def add(self, name: str, value: float, threshold: Optional[float], passed: bool, note: str = '') -> None:
        self.metrics.append(MetricResult(name, float(value), threshold, bool(passed), note))

    def format_table(self) -> str:
        width = max([len(m.name) for m in self.metrics] + [6])
        lines = [
            f"{self.case} ({self.kind}) at t={self.time:.6g} s",
            f"{'metric':<{width}}  {'value':>12}  {'limit':>12}  status",
        ]
        for m in self.metrics:
            limit = f"{m.threshold:12.4g}" if m.threshold is not None else f"{'-':>12}"
            status = 'PASS' if m.passed else 'FAIL'
            note = f"  {m.note}" if m.note else ''
            lines.append(f"{m.name:<{width}}  {m.value:12.4g}  {limit}  {status}{note}")
        lines.append('PASSED' if self.passed else 'FAILED')
        return '\n'.join(lines)


def womersley_params(config: ScenarioConfig, props: FluidProperties) -> WomersleyParams:
    spec = config.validation
    try:
        harmonics = tuple((int(n), complex(float(p), 0.0)) for n, p in spec['harmonics'])
        return WomersleyParams(
            R=float(spec['R']),
            rho=props.rho0,
            eta=props.eta,
            omega=float(spec['omega']),
            harmonics=harmonics,
            steady_gradient=float(spec.get('steady_gradient', 0.0)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigurationError(f"Invalid womersley validation block: {e}") from e


def reference_profile(config: ScenarioConfig, props: FluidProperties) -> Optional[ReferenceProfile]:
    """Analytic profile for probe files, when the scenario has one"""
    spec = config.validation
    kind = spec.get('type')
    if kind == 'channel_poiseuille':
        d, dP, L = float(spec['d']), float(spec['dP']), float(spec['L'])
        return lambda probe, y, t: np.asarray(channel_poiseuille(np.asarray(y), d, dP, props.eta, L))
    if kind == 'womersley':
        params = womersley_params(config, props)
        return lambda probe, r, t: np.asarray(
            womersley_velocity(np.clip(np.asarray(r), 0.0, params.R), t, params)
        )
    return None


def _final_samples(result: RunResult, name: str) -> ProfileSamples:
    series = result.probe_series(name)
    if not series:
        raise ConfigurationError(f"Validation probe '{name}' is not defined in the scenario")
    return series[-1].samples


def _parabolic_fit(samples: ProfileSamples) -> float:
    """Coefficient of determination of a fit v = c0 + c2 y^2"""
    y, v = samples.coordinate, samples.velocity
    if len(y) < 3:
        return 0.0
    design = np.column_stack([np.ones_like(y), y * y])
    coeffs, *_ = np.linalg.lstsq(design, v, rcond=None)
    residual = np.sum((v - design @ coeffs) ** 2)
    total = np.sum((v - v.mean()) ** 2)
    return float(1.0 - residual / total) if total > 0 else 0.0


def check_channel(
    built: BuiltScenario, runner: ScenarioRunner, result: RunResult, report: ValidationReport
) -> None:
    """RMSEP of the steady profile against plane Poiseuille flow, plus buffer pressures"""
    spec = built.config.validation
    runner.sample_probes(result)
    samples = _final_samples(result, spec['probe'])
    analytic = channel_poiseuille(samples.coordinate, float(spec['d']), float(spec['dP']), built.props.eta, float(spec['L']))
    analytic, numeric = filter_reference_samples(analytic, samples.velocity)
    limit = float(spec.get('rmsep_max', 0.03))
    error = rmsep(analytic, numeric)
    report.add('rmsep', error, limit, error <= limit, f"{len(analytic)} bins")

    store = runner.simulation.store
    for check in spec.get('pressure_checks', []):
        members = built.buffer(int(check['buffer'])).members(store)
        mean = float(np.mean(store.pressure[members])) if members.size else math.nan
        deviation = abs(mean - float(check['expected']))
        tolerance = float(check['tolerance'])
        report.add(
            f"buffer {check['buffer']} pressure", mean, tolerance, deviation <= tolerance,
            f"expected {float(check['expected']):g} Pa",
        )


def check_womersley(
    built: BuiltScenario, runner: ScenarioRunner, result: RunResult, report: ValidationReport
) -> None:
    """
    Womersley profile error at every probe instant, flow reversal and
    mixed buffer steps.

    RMSEP is scaled by the peak centreline speed over one cycle, not by
    the local analytic speed. A pointwise relative error diverges where
    the profile crosses zero during reversal.
    """
    spec = built.config.validation
    params = womersley_params(built.config, built.props)
    limit = float(spec.get('rmsep_max', 0.08))
    phases = np.linspace(0.0, params.period, 73)
    scale = max(abs(womersley_velocity(0.0, t, params)) for t in phases)
    series = result.probe_series(spec['probe'])
    window = params.period / 24.0

    centerline = []
    for target in built.config.output.probe_times:
        record = next((r for r in series if target - 1e-12 <= r.time < target + window), None)
        name = f"t={target:.4f}"
        if record is None:
            report.add(name, math.nan, limit, False, 'not reached')
            continue
        samples = record.samples
        if len(samples) == 0:
            report.add(name, math.nan, limit, False, 'empty profile')
            continue
        analytic = np.asarray(womersley_velocity(np.clip(samples.coordinate, 0.0, params.R), record.time, params))
        error = rmsep(analytic, samples.velocity, scale=scale)
        report.add(name, error, limit, error <= limit)
        centerline.append(samples.velocity[0])

    if centerline:
        report.add('flow reversal', min(centerline), 0.0, min(centerline) < 0.0 < max(centerline), 'min centerline speed')
    mixed = [r for r in result.reports if r.mixed_buffers]
    note = f"first at t={mixed[0].time:.4g} s" if mixed else ''
    report.add('mixed buffer steps', len(mixed), None, len(mixed) > 0, note)


class PlumeTracker:
    """Samples the angle of the recently emitted plume about the rotation centre"""

    def __init__(self, center: np.ndarray, age: float, interval: float):
        self.center = np.asarray(center, dtype=float)
        self.age = age
        self.interval = interval
        self.next_time = age
        self.samples: List[Tuple[float, float]] = []

    def __call__(self, sim: Simulation, report: StepReport) -> None:
        if sim.time < self.next_time - 1e-12:
            return
        self.next_time += self.interval
        store = sim.store
        recent = store.alive & (store.label == FLUID) & (store.birth_time >= sim.time - self.age)
        if not np.any(recent):
            return
        offset = store.position[recent].mean(axis=0) - self.center
        self.samples.append((sim.time, math.atan2(offset[1], offset[0])))


def _wrap(angle: float) -> float:
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


def check_sprinkler(
    built: BuiltScenario, runner: ScenarioRunner, result: RunResult, report: ValidationReport,
    tracker: Optional[PlumeTracker] = None,
) -> None:
    """Frame angle against omega t and plume displacement between samples"""
    spec = built.config.validation
    buffer = built.buffer(int(spec.get('buffer', 1)))
    omega = float(spec['omega'])
    expected = buffer.rotation.theta0 + omega * result.time
    angle_error = abs(_wrap(buffer.frame.theta - expected))
    report.add('frame angle error', angle_error, ANGLE_TOLERANCE, angle_error <= ANGLE_TOLERANCE, 'rad')

    tolerance = float(spec.get('tolerance', 0.05))
    if tracker is None or len(tracker.samples) < 2:
        report.add('plume rotation', math.nan, tolerance, False, 'too few plume samples')
        return
    errors = []
    for (t1, a1), (t2, a2) in zip(tracker.samples, tracker.samples[1:]):
        turn = omega * (t2 - t1)
        errors.append(abs(_wrap(a2 - a1) - turn) / abs(turn))
    worst = max(errors)
    report.add('plume rotation', worst, tolerance, worst <= tolerance, f"{len(errors)} intervals")


def check_conservation(
    built: BuiltScenario, runner: ScenarioRunner, result: RunResult, report: ValidationReport
) -> None:
    """Stationary particle count over the final half, outlet profile shape and mirror symmetry"""
    spec = built.config.validation
    rows = float(spec.get('count_drift_rows', 2))
    row_size = max(b.extents[1] for b in built.buffers) / built.dp
    late = [r.n_alive for r in result.reports if r.time >= 0.5 * result.time]
    if late:
        drift = max(late) - min(late)
        report.add('particle count drift', drift, rows * row_size, drift <= rows * row_size)
    else:
        report.add('particle count drift', math.nan, rows * row_size, False, 'no steps')

    names = list(spec.get('probes', []))
    runner.sample_probes(result)
    profiles = [_final_samples(result, name) for name in names]
    fit_min = float(spec.get('parabolic_r2_min', PARABOLIC_FIT_MIN))
    for name, samples in zip(names, profiles):
        fit = _parabolic_fit(samples)
        report.add(f"{name} parabolic fit", fit, fit_min, fit >= fit_min, 'R^2')

    if len(profiles) == 2:
        first, second = profiles
        limit = float(spec.get('symmetry_max', 0.05))
        order = np.argsort(second.coordinate)
        mirrored = np.interp(-first.coordinate, second.coordinate[order], second.velocity[order])
        peak = np.max(np.abs(first.velocity)) if len(first) else 0.0
        error = float(np.max(np.abs(first.velocity - mirrored)) / peak) if peak > 0 else math.nan
        report.add('outlet symmetry', error, limit, error <= limit)


CHECKS: Dict[str, Callable[..., None]] = {
    'channel_poiseuille': check_channel,
    'womersley': check_womersley,
    'sprinkler': check_sprinkler,
    'conservation': check_conservation,
}


def validate_case(
    case: Union[str, ScenarioConfig],
    dp: Optional[float] = None,
    until: Optional[float] = None,
    workers: int = 1,
    out_dir: Optional[Path] = None,
    directory: Optional[Path] = None,
) -> ValidationReport:
    """
    Run a scenario and check it against its reference

    Args:
        case: Built-in scenario name, scenario file path or loaded config
        dp: Optional particle spacing override
        until: Optional end time override
        workers: Rate evaluation worker count
        out_dir: Where snapshots and probe files go, none when omitted
        directory: Scenario library location

    Returns:
        ValidationReport with one row per checked quantity
    """
    config = case if isinstance(case, ScenarioConfig) else load_builtin(case, dp=dp, directory=directory)
    if isinstance(case, ScenarioConfig) and dp is not None:
        config = config.scaled(dp)
    kind = config.validation.get('type')
    if kind not in CHECKS:
        logger.error(f"❌ Scenario '{config.name}' has no known validation type ({kind})")
        logger.info(f"📋 Available validation types: {list(CHECKS.keys())}")
        raise ConfigurationError(f"Scenario '{config.name}' has no validation block of a known type")

    built = build_scenario(config)
    tracker = None
    if kind == 'sprinkler':
        buffer = built.buffer(int(config.validation.get('buffer', 1)))
        tracker = PlumeTracker(
            buffer.rotation.center, float(config.validation.get('plume_age', 0.1)),
            config.output.snapshot_every or 0.25,
        )
    runner = ScenarioRunner(
        built, out_dir, workers, reference=reference_profile(config, built.props), observer=tracker,
    )
    result = runner.run(until)

    report = ValidationReport(case=config.name, kind=kind, time=result.time)
    if kind == 'sprinkler':
        check_sprinkler(built, runner, result, report, tracker)
    else:
        CHECKS[kind](built, runner, result, report)

    status = '✅' if report.passed else '❌'
    logger.info(f"📊 {status} Validation '{config.name}': {sum(m.passed for m in report.metrics)}/{len(report.metrics)} checks passed")
    return report
