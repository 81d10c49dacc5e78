"""
Run a built scenario with snapshots and probe sampling
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from solver.exceptions import NumericalAbortError
from solver.simulation import Simulation, StepReport
from validation.metrics import ProfileSamples, extract_profile

from .builder import BuiltScenario, Probe
from .output import write_profile_csv, write_snapshot

logger = logging.getLogger(__name__)

ReferenceProfile = Callable[[Probe, np.ndarray, float], np.ndarray]


@dataclass
class ProbeRecord:
    probe: str
    time: float
    samples: ProfileSamples
    analytic: Optional[np.ndarray] = None


@dataclass
class RunResult:
    """Everything a run produced"""

    time: float
    reports: List[StepReport] = field(default_factory=list)
    snapshots: List[Path] = field(default_factory=list)
    probes: List[ProbeRecord] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.reports)

    def probe_series(self, name: str) -> List[ProbeRecord]:
        return [record for record in self.probes if record.probe == name]

    def spawned_totals(self) -> Dict[int, int]:
        totals: Dict[int, int] = {}
        for report in self.reports:
            for buffer_id, count in report.spawned.items():
                totals[buffer_id] = totals.get(buffer_id, 0) + count
        return totals


class _Schedule:
    """Fires once per requested time, at the first step reaching it"""

    def __init__(self, times: List[float]):
        self.times = sorted(times)
        self.index = 0

    def due(self, t: float) -> bool:
        fired = False
        while self.index < len(self.times) and t >= self.times[self.index] - 1e-12:
            self.index += 1
            fired = True
        return fired


def _every(interval: Optional[float], until: float) -> List[float]:
    if not interval:
        return []
    return list(np.arange(interval, until + 0.5 * interval, interval))


class ScenarioRunner:
    """
    Drives a Simulation to a target time, writing snapshots and probe
    profiles on their schedules.
    """

    def __init__(
        self,
        built: BuiltScenario,
        out_dir: Optional[Path] = None,
        workers: int = 1,
        reference: Optional[ReferenceProfile] = None,
        precision: int = 17,
        max_substeps: Optional[int] = None,
        observer: Optional[Callable[[Simulation, StepReport], None]] = None,
    ):
        self.built = built
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.workers = workers
        self.reference = reference
        self.precision = precision
        self.max_substeps = max_substeps
        self.observer = observer
        self.simulation: Optional[Simulation] = None
        self._snapshot_index = 0

    def _snapshot(self, result: RunResult, suffix: Optional[str] = None) -> None:
        if self.out_dir is None:
            return
        sim = self.simulation
        name = suffix or f"{self._snapshot_index:05d}"
        path = self.out_dir / 'snapshots' / f"{self.built.config.name}_{name}.csv"
        result.snapshots.append(write_snapshot(sim.store, sim.time, path, self.precision))
        if suffix is None:
            self._snapshot_index += 1

    def sample_probes(self, result: RunResult) -> None:
        sim = self.simulation
        for probe in self.built.probes:
            samples = extract_profile(
                sim.store, probe.frame, 0.0, probe.n_bins, probe.half_width,
                self.built.dp, kernel=sim.kernel, radial=probe.radial,
            )
            analytic = self.reference(probe, samples.coordinate, sim.time) if self.reference else None
            record = ProbeRecord(probe.name, sim.time, samples, analytic)
            result.probes.append(record)
            if self.out_dir is not None:
                index = len(result.probe_series(probe.name)) - 1
                path = self.out_dir / 'probes' / f"{probe.name}_{index:05d}.csv"
                write_profile_csv(path, samples.coordinate, samples.velocity, analytic, probe.radial)

    def run(self, until: Optional[float] = None) -> RunResult:
        """
        Advance to ``until`` (the scenario end time by default)

        Raises:
            NumericalAbortError: After writing a diagnostic snapshot
        """
        config = self.built.config
        until = config.end_time if until is None else until
        output = config.output
        snapshots = _Schedule(_every(output.snapshot_every, until))
        probe_times = set(output.probe_times) | set(_every(output.probe_every or output.snapshot_every, until))
        probe_schedule = _Schedule(sorted(probe_times))

        self.simulation = self.built.make_simulation(self.workers, self.max_substeps)
        result = RunResult(time=self.simulation.time)
        logger.info(f"🚀 Running '{config.name}' to t={until:g} s with {self.workers} worker(s)")
        self._snapshot(result)

        def on_step(sim: Simulation, report: StepReport) -> None:
            result.reports.append(report)
            logger.debug(
                f"🔄 step {report.step} t={report.time:.6g} dt={report.dt:.3e} x{report.n_substeps} "
                f"n={report.n_alive} |v|max={report.max_speed:.3e}"
            )
            if report.mixed_buffers:
                logger.debug(f"🔄 Mixed generation/deletion in buffers {sorted(report.mixed_buffers)}")
            if snapshots.due(sim.time):
                self._snapshot(result)
                logger.info(f"💾 t={sim.time:.6g} s, {sim.store.n_alive} particles, step {report.step}")
            if probe_schedule.due(sim.time):
                self.sample_probes(result)
            if self.observer is not None:
                self.observer(sim, report)

        try:
            with self.simulation:
                self.simulation.run(until, callback=on_step)
        except NumericalAbortError as e:
            logger.error(f"❌ Numerical abort in '{config.name}': {str(e)}")
            self._snapshot(result, suffix='abort')
            raise

        result.time = self.simulation.time
        logger.info(f"✅ '{config.name}' reached t={result.time:.6g} s after {result.steps} steps")
        return result


def run_scenario(
    built: BuiltScenario,
    until: Optional[float] = None,
    out_dir: Optional[Path] = None,
    workers: int = 1,
    reference: Optional[ReferenceProfile] = None,
    precision: int = 17,
    max_substeps: Optional[int] = None,
) -> RunResult:
    """Run ``built`` to ``until`` with a fresh ScenarioRunner"""
    runner = ScenarioRunner(
        built, out_dir, workers, reference, precision=precision, max_substeps=max_substeps,
    )
    return runner.run(until)
