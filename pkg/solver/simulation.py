"""
Advection/acoustic step loop
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Set

import numpy as np

from config.app_settings import NumericsSettings, get_numerics_settings

from .buffers import BufferKind, BufferZone, refresh_members, run_structural_phase
from .exceptions import NumericalAbortError
from .kernel import SmoothingKernel
from .neighbors import CellGrid, NeighborPairs
from .particles import FluidProperties, ParticleStore
from .wcsph import (
    StepSizes,
    compute_rates,
    compute_step_sizes,
    density_reinit,
    flag_near_boundary,
    integrate_acoustic_substep,
    tvf_advection_velocity,
)

logger = logging.getLogger(__name__)


@dataclass
class StepReport:
    """Bookkeeping for one advection step"""

    step: int
    time: float
    dt: float
    n_substeps: int
    n_alive: int
    max_speed: float
    spawned: Dict[int, int] = field(default_factory=dict)
    deleted: Dict[int, int] = field(default_factory=dict)
    mixed_buffers: Set[int] = field(default_factory=set)
    exit_deleted: int = 0

    @property
    def total_spawned(self) -> int:
        return sum(self.spawned.values())

    @property
    def total_deleted(self) -> int:
        return sum(self.deleted.values()) + self.exit_deleted


class Simulation:
    """
    Owns the particle state of one scenario and advances it.

    Each advection step flags near-boundary particles, rebuilds pairs,
    reinitializes density, evaluates rates and runs the acoustic substeps.
    Every substep runs the buffer structural phase between drift and the
    rate update, then imposes the boundary conditions.
    """

    def __init__(
        self,
        store: ParticleStore,
        grid: CellGrid,
        kernel: SmoothingKernel,
        props: FluidProperties,
        buffers: Sequence[BufferZone],
        dp: float,
        numerics: Optional[NumericsSettings] = None,
        workers: int = 1,
        reinitialize_density: bool = True,
        tvf_lambda: Optional[float] = None,
        delete_outside_domain: bool = False,
        max_substeps: Optional[int] = None,
        t0: float = 0.0,
    ):
        self.store = store
        self.grid = grid
        self.kernel = kernel
        self.props = props
        self.buffers = sorted(buffers, key=lambda b: b.id)
        self.dp = dp
        self.numerics = numerics or get_numerics_settings()
        self.workers = max(1, int(workers))
        self.reinitialize_density = reinitialize_density
        self.tvf_lambda = self.numerics.tvf_lambda if tvf_lambda is None else tvf_lambda
        self.delete_outside_domain = delete_outside_domain
        self.max_substeps = max_substeps

        self.time = t0
        self.step_count = 0
        self.reference_sum = kernel.reference_sum(dp)
        self.pairs: Optional[NeighborPairs] = None
        self.executor = ThreadPoolExecutor(max_workers=self.workers) if self.workers > 1 else None
        self._report: Optional[StepReport] = None

        self.grid.rebuild(self.store)
        for buffer in self.buffers:
            buffer.update_local_cells(self.grid)

    def close(self) -> None:
        if self.executor is not None:
            self.executor.shutdown(wait=True)
            self.executor = None

    def __enter__(self) -> "Simulation":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def boundary_pressure_override(self) -> np.ndarray:
        """Per-slot p_b for buffer members with a boundary condition, NaN elsewhere"""
        override = np.full(len(self.store), np.nan)
        for buffer in self.buffers:
            if buffer.bc is None:
                continue
            members = buffer.members(self.store)
            if members.size:
                override[members] = buffer.bc.boundary_pressure(buffer, self.store, members, self.time)
        return override

    def refresh_pairs(self) -> NeighborPairs:
        self.pairs = self.grid.pairs(self.store, self.kernel.support_radius)
        return self.pairs

    def evaluate_rates(self) -> None:
        """Pairs from the current grid, then continuity, momentum and wall terms"""
        self.refresh_pairs()
        compute_rates(
            self.store, self.pairs, self.kernel, self.props,
            p_b_override=self.boundary_pressure_override(),
            executor=self.executor, workers=self.workers,
        )

    def structural_phase(self, t: float) -> None:
        """Buffer generation/deletion, exit deletion, compaction and grid rebuild"""
        spawned, deleted = run_structural_phase(self.buffers, self.store, self.grid, t, self.props)
        exit_deleted = 0
        if self.delete_outside_domain:
            outside = self.grid.outside(self.store.position) & self.store.fluid_mask()
            exit_deleted = self.store.delete_particles(np.flatnonzero(outside))
        self.store.compact()
        self.grid.rebuild(self.store)

        if self._report is not None:
            for buffer in self.buffers:
                if buffer.last_spawned:
                    self._report.spawned[buffer.id] = self._report.spawned.get(buffer.id, 0) + buffer.last_spawned
                if buffer.last_deleted:
                    self._report.deleted[buffer.id] = self._report.deleted.get(buffer.id, 0) + buffer.last_deleted
                if buffer.last_spawned and buffer.last_deleted:
                    self._report.mixed_buffers.add(buffer.id)
            self._report.exit_deleted += exit_deleted
        logger.debug(f"🔄 t={t:.6g}: spawned {spawned}, deleted {deleted + exit_deleted}")

    def apply_boundary_conditions(self) -> None:
        for buffer in self.buffers:
            if buffer.bc is not None:
                buffer.bc.apply(buffer, self.store, self.time)

    def check_density(self) -> None:
        fluid = self.store.fluid_mask()
        rho = self.store.density[fluid]
        lower = self.numerics.density_lower * self.props.rho0
        upper = self.numerics.density_upper * self.props.rho0
        if rho.size and (not np.all(np.isfinite(rho)) or rho.min() < lower or rho.max() > upper):
            raise NumericalAbortError(
                f"Density left [{lower:g}, {upper:g}] at t={self.time:.6g} "
                f"(min {np.nanmin(rho):.6g}, max {np.nanmax(rho):.6g})",
                time=self.time,
            )

    def step_sizes(self) -> StepSizes:
        return compute_step_sizes(
            self.store, self.props, self.kernel,
            advection_cfl=self.numerics.advection_cfl,
            acoustic_cfl=self.numerics.acoustic_cfl,
            max_substeps=self.max_substeps,
        )

    def advance(self) -> StepReport:
        """One advection step"""
        flag_near_boundary(self.store, self.buffers, self.dp, self.numerics.near_boundary_layers)
        self.refresh_pairs()
        if self.reinitialize_density:
            density_reinit(self.store, self.pairs, self.kernel, self.props, self.reference_sum)
        self.evaluate_rates()

        sizes = self.step_sizes()
        dt = sizes.substep
        self._report = StepReport(
            step=self.step_count, time=self.time, dt=sizes.dt_advection,
            n_substeps=sizes.n_substeps, n_alive=0, max_speed=0.0,
        )
        for _ in range(sizes.n_substeps):
            t_next = self.time + dt
            tvf_advection_velocity(self.store, self.pairs, self.kernel, self.props, self.tvf_lambda, dt)
            integrate_acoustic_substep(
                self.store, dt, self.props,
                compute_rates=self.evaluate_rates,
                after_drift=lambda: self.structural_phase(t_next),
            )
            self.time = t_next
            self.apply_boundary_conditions()
            self.check_density()

        for buffer in self.buffers:
            if buffer.bc is not None:
                buffer.bc.advance(buffer, self.store, sizes.dt_advection, self.time, self.dp)
        for buffer in self.buffers:
            if buffer.kind != BufferKind.INFLOW:
                refresh_members(buffer, self.store, self.grid)
        self.store.check_ledger()

        report = self._report
        report.time = self.time
        report.n_alive = self.store.n_alive
        fluid = self.store.fluid_mask()
        speeds = np.linalg.norm(self.store.velocity[fluid], axis=1)
        report.max_speed = float(speeds.max()) if speeds.size else 0.0
        self._report = None
        self.step_count += 1
        return report

    def run(self, until: float, callback: Optional[Callable[["Simulation", StepReport], None]] = None) -> List[StepReport]:
        """Advance until ``until``; the callback sees every completed step"""
        reports = []
        while self.time < until - 1e-12 * max(1.0, abs(until)):
            report = self.advance()
            reports.append(report)
            if callback is not None:
                callback(self, report)
        return reports
