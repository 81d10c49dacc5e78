"""
Turn a ScenarioConfig into particles, buffers and a ready-to-run Simulation
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from boundaries.factory import BoundaryConditionFactory
from config.app_settings import NumericsSettings, get_numerics_settings
from solver.buffers import BufferKind, BufferZone, EmitterRotation, identify_inflow_members
from solver.exceptions import ConfigurationError
from solver.frames import FrameTransform
from solver.kernel import SmoothingKernel
from solver.neighbors import CellGrid
from solver.particles import FLUID, WALL, FluidProperties, ParticleStore
from solver.simulation import Simulation

from .config import BufferSpec, ScenarioConfig
from .geometry import SeededGeometry, buffer_frame, seed_geometry

logger = logging.getLogger(__name__)

DEFAULT_BUFFER_LAYERS = 4


@dataclass
class Probe:
    """Cross-section where velocity profiles are sampled; +X' along the flow"""

    name: str
    frame: FrameTransform
    half_width: float
    n_bins: int
    radial: bool = False


@dataclass
class BuiltScenario:
    config: ScenarioConfig
    store: ParticleStore
    grid: CellGrid
    kernel: SmoothingKernel
    props: FluidProperties
    buffers: List[BufferZone]
    geometry: SeededGeometry
    numerics: NumericsSettings
    probes: List[Probe] = field(default_factory=list)

    @property
    def dp(self) -> float:
        return self.config.dp

    def buffer(self, buffer_id: int) -> BufferZone:
        for buffer in self.buffers:
            if buffer.id == buffer_id:
                return buffer
        raise KeyError(f"No buffer {buffer_id}")

    def probe(self, name: str) -> Probe:
        for probe in self.probes:
            if probe.name == name:
                return probe
        raise KeyError(f"No probe '{name}'")

    def make_simulation(self, workers: int = 1, max_substeps: Optional[int] = None) -> Simulation:
        """Simulation over this state; the scenario substep cap wins over ``max_substeps``"""
        return Simulation(
            self.store, self.grid, self.kernel, self.props, self.buffers, self.dp,
            numerics=self.numerics,
            workers=workers,
            reinitialize_density=self.config.density_reinit,
            tvf_lambda=self.config.tvf_lambda,
            delete_outside_domain=self.config.geometry.delete_outside_domain,
            max_substeps=self.config.max_substeps or max_substeps,
        )


def _wrap_angle(angle: float) -> float:
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


def _make_buffer(
    spec: BufferSpec, config: ScenarioConfig, geometry: SeededGeometry, props: FluidProperties
) -> BufferZone:
    dim, dp = config.dim, config.dp
    depth = spec.a if spec.a is not None else (spec.layers or DEFAULT_BUFFER_LAYERS) * dp

    if spec.port is not None:
        port = geometry.global_port(spec.port)
        inward = port.inward / np.linalg.norm(port.inward)
        origin = port.position + inward * depth / 2.0
        axis = inward if spec.kind != BufferKind.OUTFLOW.value else -inward
        width = port.width
    else:
        if dim == 2:
            if spec.angle_deg is None:
                raise ConfigurationError(f"Buffer {spec.id} needs angle_deg with an explicit origin")
            angle = math.radians(spec.angle_deg)
            design_axis = np.array([math.cos(angle), math.sin(angle)])
        else:
            if spec.axis is None:
                raise ConfigurationError(f"Buffer {spec.id} needs an axis with an explicit origin")
            design_axis = np.asarray(spec.axis, dtype=float)
        if spec.b is None:
            raise ConfigurationError(f"Buffer {spec.id} needs a width b with an explicit origin")
        origin = geometry.placement.to_global(np.asarray(spec.origin, dtype=float))
        axis = geometry.placement.vector_to_global(design_axis)
        width = spec.b

    extents = [depth, spec.b if spec.b is not None else width]
    if dim == 3:
        extents.append(spec.c if spec.c is not None else extents[1])
    frame = buffer_frame(origin, axis, dim)

    bc = None
    if spec.bc is not None:
        bc_config = dict(spec.bc)
        bc_config.setdefault('fluid', {'eta': props.eta, 'rho0': props.rho0})
        bc = BoundaryConditionFactory.create_condition(bc_config)

    rotation = None
    if spec.rotate is not None:
        if abs(_wrap_angle(spec.rotate.theta0 - frame.theta)) > 1e-9:
            raise ConfigurationError(
                f"Buffer {spec.id}: rotation theta0={spec.rotate.theta0:g} does not match "
                f"its frame angle {frame.theta:g}"
            )
        rotation = EmitterRotation(
            omega=spec.rotate.omega,
            theta0=frame.theta,
            center=geometry.placement.to_global(np.asarray(spec.rotate.center, dtype=float)),
        )

    buffer = BufferZone(
        id=spec.id, kind=BufferKind(spec.kind), frame=frame, extents=tuple(extents),
        bc=bc, rotation=rotation, name=spec.port or f"buffer-{spec.id}",
    )
    buffer.check_depth(dp)
    return buffer


def _check_overlap(buffers: List[BufferZone], fluid: np.ndarray) -> None:
    if len(buffers) < 2 or fluid.size == 0:
        return
    inside = np.array([b.in_box(b.frame.to_local(fluid)) for b in buffers])
    shared = np.count_nonzero(inside, axis=0) > 1
    if np.any(shared):
        owners = [b.id for b, mask in zip(buffers, inside) if np.any(mask & shared)]
        raise ConfigurationError(f"Buffers {owners} overlap ({int(np.count_nonzero(shared))} shared particles)")


def _grid_bounds(config: ScenarioConfig, store: ParticleStore, cell_size: float):
    geometry = config.geometry
    if geometry.domain_lower is not None and geometry.domain_upper is not None:
        return np.asarray(geometry.domain_lower), np.asarray(geometry.domain_upper)
    margin = 2.0 * cell_size
    return store.position.min(axis=0) - margin, store.position.max(axis=0) + margin


def build_scenario(config: ScenarioConfig, numerics: Optional[NumericsSettings] = None) -> BuiltScenario:
    """
    Seed the lattice, create walls and buffers and identify buffer members

    Args:
        config: Validated scenario
        numerics: Numerical settings, defaults to the application settings

    Returns:
        BuiltScenario holding the initial state

    Raises:
        ConfigurationError: Overlapping or empty buffers, under-resolved
            channels, shallow buffers or an inconsistent rotation
    """
    numerics = numerics or get_numerics_settings()
    dp, dim = config.dp, config.dim
    logger.info(f"🚀 Building scenario '{config.name}' (dim={dim}, dp={dp:g})")
    try:
        props = config.fluid.properties()
        kernel = SmoothingKernel.from_spacing(dp, dim, numerics.smoothing_ratio)
        geometry = seed_geometry(config.geometry, dim, dp, numerics.wall_layers)
        if len(geometry.fluid) == 0:
            raise ConfigurationError(f"Scenario '{config.name}' seeds no fluid particles")

        store = ParticleStore(dim)
        mass = props.rho0 * dp ** dim
        store.add_particles(geometry.fluid, FLUID, mass, props.rho0)
        if len(geometry.wall):
            store.add_particles(geometry.wall, WALL, mass, props.rho0)

        buffers = [_make_buffer(spec, config, geometry, props) for spec in config.buffers]
        _check_overlap(buffers, geometry.fluid)
        for buffer in buffers:
            identify_inflow_members(buffer, store)

        lower, upper = _grid_bounds(config, store, kernel.support_radius)
        grid = CellGrid(lower, upper, kernel.support_radius)

        probes = []
        for spec in config.output.probes:
            point, direction, width = geometry.station(spec.segment, spec.s)
            radial = spec.radial or dim == 3
            n_bins = spec.n_bins or max(1, int(round((width / 2.0 if radial else width) / dp)))
            probes.append(Probe(spec.name, buffer_frame(point, direction, dim), width / 2.0, n_bins, radial))

        for buffer in buffers:
            if buffer.bc is not None:
                buffer.bc.apply(buffer, store, 0.0)
    except ConfigurationError as e:
        logger.error(f"❌ Cannot build scenario '{config.name}': {str(e)}")
        raise

    built = BuiltScenario(
        config=config, store=store, grid=grid, kernel=kernel, props=props,
        buffers=buffers, geometry=geometry, numerics=numerics, probes=probes,
    )
    logger.info(
        f"✅ Built '{config.name}': {store.label_counts()} with c0={props.c0:g} m/s, "
        f"{len(buffers)} buffers, {len(probes)} probes"
    )
    return built
