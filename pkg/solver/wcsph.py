"""
Weakly-compressible Riemann SPH core

Rates are evaluated over the directed pair list of :class:`NeighborPairs`;
every sum is a scatter-add onto the first particle of the pair. Only fluid
and buffer particles receive rates, wall particles act as neighbors.
"""

import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional, Sequence, Tuple, Union

import numpy as np

from .kernel import SmoothingKernel
from .neighbors import NeighborPairs
from .particles import FLUID, WALL, FluidProperties, ParticleStore

if TYPE_CHECKING:
    from .buffers import BufferZone

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def eos_pressure(rho: ArrayLike, props: FluidProperties) -> ArrayLike:
    """p = c0^2 (rho - rho0)"""
    return props.c0 ** 2 * (rho - props.rho0)


def eos_density(p_b: ArrayLike, props: FluidProperties) -> ArrayLike:
    """rho = rho0 + p / c0^2"""
    return props.rho0 + p_b / props.c0 ** 2


def apply_eos(store: ParticleStore, props: FluidProperties) -> None:
    mask = store.fluid_mask()
    store.pressure[mask] = eos_pressure(store.density[mask], props)


@dataclass
class RiemannPair:
    """Left/right initial states along the pair line (arrays broadcast per pair)"""

    rhoL: ArrayLike
    UL: ArrayLike
    PL: ArrayLike
    rhoR: ArrayLike
    UR: ArrayLike
    PR: ArrayLike

    @property
    def rho_mean(self) -> ArrayLike:
        return 0.5 * (self.rhoL + self.rhoR)

    @property
    def U_mean(self) -> ArrayLike:
        return 0.5 * (self.UL + self.UR)

    @property
    def P_mean(self) -> ArrayLike:
        return 0.5 * (self.PL + self.PR)


def dissipation_limiter(UL: ArrayLike, UR: ArrayLike, c0: float) -> ArrayLike:
    """beta = min(3 max(UL - UR, 0), c0)"""
    return np.minimum(3.0 * np.maximum(UL - UR, 0.0), c0)


def riemann_star(pair: RiemannPair, props: FluidProperties) -> Tuple[ArrayLike, ArrayLike]:
    """Intermediate velocity and pressure of the linearized pair problem"""
    rho_mean = pair.rho_mean
    beta = dissipation_limiter(pair.UL, pair.UR, props.c0)
    u_star = pair.U_mean + (pair.PL - pair.PR) / (2.0 * rho_mean * props.c0)
    p_star = pair.P_mean + 0.5 * beta * rho_mean * (pair.UL - pair.UR)
    return u_star, p_star


def _receiving(store: ParticleStore, pairs: NeighborPairs, wall_neighbors: bool) -> NeighborPairs:
    """Pairs whose first particle is fluid and second is (not) a wall"""
    lab_i = store.label[pairs.i]
    lab_j = store.label[pairs.j]
    partner = lab_j == WALL if wall_neighbors else lab_j != WALL
    return pairs.subset((lab_i != WALL) & partner)


def pair_states(store: ParticleStore, pairs: NeighborPairs, wall_neighbors: bool = False) -> RiemannPair:
    """
    Initial states built along -e_ij.

    For wall neighbors the right state mirrors the normal velocity about the
    wall velocity and copies pressure and density from the fluid side.
    """
    e = pairs.e
    UL = -np.einsum('ij,ij->i', store.velocity[pairs.i], e)
    UR = -np.einsum('ij,ij->i', store.velocity[pairs.j], e)
    rhoL = store.density[pairs.i]
    PL = store.pressure[pairs.i]
    if wall_neighbors:
        return RiemannPair(rhoL=rhoL, UL=UL, PL=PL, rhoR=rhoL, UR=-UL + 2.0 * UR, PR=PL)
    return RiemannPair(rhoL=rhoL, UL=UL, PL=PL, rhoR=store.density[pairs.j], UR=UR, PR=store.pressure[pairs.j])


def _continuity_terms(store, pairs, kernel, props, wall_neighbors):
    sub = _receiving(store, pairs, wall_neighbors)
    if len(sub) == 0:
        return sub, np.zeros(0)
    state = pair_states(store, sub, wall_neighbors)
    u_star, _ = riemann_star(state, props)
    e = sub.e
    v_mean = 0.5 * (store.velocity[sub.i] + store.velocity[sub.j])
    v_star = v_mean - (u_star - state.U_mean)[:, None] * e
    grad = kernel.gradient_magnitude(sub.r)[:, None] * e
    rel = np.einsum('ij,ij->i', store.velocity[sub.i] - v_star, grad)
    rho_j = store.density[sub.j]
    terms = 2.0 * store.density[sub.i] * store.mass[sub.j] / rho_j * rel
    return sub, terms


def _momentum_terms(store, pairs, kernel, props, wall_neighbors, p_b_override):
    sub = _receiving(store, pairs, wall_neighbors)
    if len(sub) == 0:
        return sub, np.zeros((0, store.dim))
    state = pair_states(store, sub, wall_neighbors)
    _, p_star = riemann_star(state, props)
    if p_b_override is not None:
        p_b = p_b_override[sub.i]
        p_star = p_star - np.where(np.isnan(p_b), 0.0, p_b)

    dw = kernel.gradient_magnitude(sub.r)
    e = sub.e
    rho_ij = store.density[sub.i] * store.density[sub.j]
    m_j = store.mass[sub.j]
    pressure = (-2.0 * m_j * p_star / rho_ij * dw)[:, None] * e
    v_ij = store.velocity[sub.i] - store.velocity[sub.j]
    viscous = (2.0 * m_j * props.eta / (rho_ij * sub.r) * dw)[:, None] * v_ij
    return sub, pressure + viscous


def continuity_rate(
    store: ParticleStore,
    pairs: NeighborPairs,
    kernel: SmoothingKernel,
    props: FluidProperties,
    executor: Optional[Executor] = None,
    workers: int = 1,
) -> np.ndarray:
    """Write drho/dt from fluid-fluid pairs"""
    sub, terms = _continuity_terms(store, pairs, kernel, props, wall_neighbors=False)
    store.density_rate = sub.sum_by_i(terms, len(store), executor, workers)
    return store.density_rate


def momentum_rate(
    store: ParticleStore,
    pairs: NeighborPairs,
    kernel: SmoothingKernel,
    props: FluidProperties,
    p_b_override: Optional[np.ndarray] = None,
    executor: Optional[Executor] = None,
    workers: int = 1,
) -> np.ndarray:
    """
    Write dv/dt from fluid-fluid pairs.

    Args:
        p_b_override: Per-slot boundary pressure, NaN where no correction
            applies. The correction +2 p_b sum m_j/(rho_i rho_j) grad W is
            folded into the pair pressure as P* - p_b.
    """
    sub, terms = _momentum_terms(store, pairs, kernel, props, False, p_b_override)
    store.acceleration = sub.sum_by_i(terms, len(store), executor, workers)
    return store.acceleration


def wall_interaction(
    store: ParticleStore,
    pairs: NeighborPairs,
    kernel: SmoothingKernel,
    props: FluidProperties,
    p_b_override: Optional[np.ndarray] = None,
    executor: Optional[Executor] = None,
    workers: int = 1,
) -> None:
    """Add the one-sided wall contributions to drho/dt and dv/dt"""
    sub, drho = _continuity_terms(store, pairs, kernel, props, wall_neighbors=True)
    if len(sub) == 0:
        return
    store.density_rate += sub.sum_by_i(drho, len(store), executor, workers)
    sub, dv = _momentum_terms(store, pairs, kernel, props, True, p_b_override)
    store.acceleration += sub.sum_by_i(dv, len(store), executor, workers)


def compute_rates(
    store: ParticleStore,
    pairs: NeighborPairs,
    kernel: SmoothingKernel,
    props: FluidProperties,
    p_b_override: Optional[np.ndarray] = None,
    executor: Optional[Executor] = None,
    workers: int = 1,
) -> None:
    continuity_rate(store, pairs, kernel, props, executor, workers)
    momentum_rate(store, pairs, kernel, props, p_b_override, executor, workers)
    wall_interaction(store, pairs, kernel, props, p_b_override, executor, workers)
    walls = store.label == WALL
    store.density_rate[walls] = 0.0
    store.acceleration[walls] = 0.0


def interior_mask(store: ParticleStore) -> np.ndarray:
    """Fluid particles away from every open boundary"""
    return store.alive & (store.label == FLUID) & ~store.near_boundary


def background_pressure_acceleration(
    store: ParticleStore,
    pairs: NeighborPairs,
    kernel: SmoothingKernel,
    p_max: float,
) -> np.ndarray:
    """-p_max sum 2 m_j/(rho_i rho_j) dW/dr e_ij over all neighbors"""
    sub = pairs.subset(store.label[pairs.i] != WALL)
    coeff = 2.0 * store.mass[sub.j] / (store.density[sub.i] * store.density[sub.j]) * kernel.gradient_magnitude(sub.r)
    return -p_max * sub.sum_by_i(coeff[:, None] * sub.e, len(store))


def tvf_advection_velocity(
    store: ParticleStore,
    pairs: NeighborPairs,
    kernel: SmoothingKernel,
    props: FluidProperties,
    lam: float,
    dt: float,
) -> None:
    """
    Transport velocity: interior particles get v + dt (dv/dt + background
    term), all others get v.
    """
    fluid = store.fluid_mask()
    store.advection_velocity[fluid] = store.velocity[fluid]
    interior = interior_mask(store)
    if not np.any(interior):
        return
    speeds = np.linalg.norm(store.velocity[fluid], axis=1)
    v_max = float(speeds.max()) if speeds.size else 0.0
    p_max = lam * props.rho0 * v_max ** 2
    background = background_pressure_acceleration(store, pairs, kernel, p_max) if p_max > 0 else 0.0
    store.advection_velocity[interior] = store.velocity[interior] + dt * (
        store.acceleration[interior] + (background[interior] if p_max > 0 else 0.0)
    )


def density_reinit(
    store: ParticleStore,
    pairs: NeighborPairs,
    kernel: SmoothingKernel,
    props: FluidProperties,
    reference_sum: float,
) -> None:
    """rho = rho0 sum W / sum W0 for interior fluid, self term included"""
    interior = interior_mask(store)
    if not np.any(interior):
        return
    sums = pairs.sum_by_i(kernel.value(pairs.r), len(store)) + kernel.value(0.0)
    store.density[interior] = props.rho0 * sums[interior] / reference_sum
    store.pressure[interior] = eos_pressure(store.density[interior], props)


@dataclass(frozen=True)
class StepSizes:
    dt_advection: float
    dt_acoustic: float

    @property
    def n_substeps(self) -> int:
        return max(1, int(math.ceil(self.dt_advection / self.dt_acoustic - 1e-12)))

    @property
    def substep(self) -> float:
        return self.dt_advection / self.n_substeps


def compute_step_sizes(
    store: ParticleStore,
    props: FluidProperties,
    kernel: SmoothingKernel,
    advection_cfl: float = 0.25,
    acoustic_cfl: float = 0.6,
    max_substeps: Optional[int] = None,
) -> StepSizes:
    """Dual-criteria step sizes from the current maximum speed"""
    fluid = store.fluid_mask()
    speeds = np.linalg.norm(store.velocity[fluid], axis=1)
    v_max = float(speeds.max()) if speeds.size else 0.0
    h = kernel.h

    limits = []
    if v_max > 0:
        limits.append(h / v_max)
    if props.nu > 0:
        limits.append(h * h / props.nu)
    dt_acoustic = acoustic_cfl * h / (props.c0 + v_max)
    dt_advection = advection_cfl * min(limits) if limits else dt_acoustic
    dt_acoustic = min(dt_acoustic, dt_advection)
    if max_substeps is not None and dt_advection > max_substeps * dt_acoustic:
        dt_advection = max_substeps * dt_acoustic
    return StepSizes(dt_advection=dt_advection, dt_acoustic=dt_acoustic)


def integrate_acoustic_substep(
    store: ParticleStore,
    dt: float,
    props: FluidProperties,
    compute_rates: Optional[Callable[[], None]] = None,
    after_drift: Optional[Callable[[], None]] = None,
) -> None:
    """
    Kick-drift-kick update of fluid and buffer particles.

    Args:
        dt: Substep size
        compute_rates: Re-evaluates rates at the drifted positions
        after_drift: Structural phase run between drift and the rate update
    """
    fluid = store.fluid_mask()
    store.velocity[fluid] += 0.5 * dt * store.acceleration[fluid]
    store.density[fluid] += 0.5 * dt * store.density_rate[fluid]
    apply_eos(store, props)

    boundary = fluid & ~interior_mask(store)
    store.advection_velocity[boundary] = store.velocity[boundary]
    store.position[fluid] += dt * store.advection_velocity[fluid]

    if after_drift is not None:
        after_drift()
    if compute_rates is not None:
        compute_rates()

    fluid = store.fluid_mask()
    store.velocity[fluid] += 0.5 * dt * store.acceleration[fluid]
    store.density[fluid] += 0.5 * dt * store.density_rate[fluid]
    apply_eos(store, props)


def flag_near_boundary(
    store: ParticleStore, buffers: Sequence["BufferZone"], dp: float, layers: float = 3.0
) -> np.ndarray:
    """Buffer particles and particles within ``layers`` dp of a buffer box along X'"""
    near = store.label >= 1
    for buffer in buffers:
        local = buffer.frame.to_local(store.position)
        half = np.asarray(buffer.extents) / 2.0
        inside = np.abs(local[:, 0]) < half[0] + layers * dp
        for axis in range(1, store.dim):
            inside &= np.abs(local[:, axis]) < half[axis]
        near |= inside
    store.near_boundary = near & store.alive
    return store.near_boundary
