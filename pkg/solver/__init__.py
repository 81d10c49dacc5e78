"""
Weakly-compressible SPH core: kernel, frames, particles, neighbor search,
rates, buffers and the step loop
"""

from .buffers import (
    BufferKind,
    BufferZone,
    EmitterRotation,
    bidirectional_step,
    identify_inflow_members,
    inflow_step,
    outflow_step,
    refresh_members,
    rotate_emitter,
    run_structural_phase,
)
from .exceptions import (
    ConfigurationError,
    KernelDomainError,
    NumericalAbortError,
    OracleDomainError,
    ParticleLifecycleError,
    SolverError,
)
from .frames import FrameTransform, make_frame_2d, make_frame_3d, to_global_recycled, to_local
from .kernel import SmoothingKernel, kernel_gradient_magnitude, kernel_value
from .neighbors import CellGrid, LocalCellSet, NeighborPairs, local_candidates
from .particles import FLUID, WALL, FluidProperties, ParticleStore
from .simulation import Simulation, StepReport
from .wcsph import compute_rates, compute_step_sizes, density_reinit, riemann_star, tvf_advection_velocity

__all__ = [
    'FLUID',
    'WALL',
    'BufferKind',
    'BufferZone',
    'CellGrid',
    'ConfigurationError',
    'EmitterRotation',
    'FluidProperties',
    'FrameTransform',
    'KernelDomainError',
    'LocalCellSet',
    'NeighborPairs',
    'NumericalAbortError',
    'OracleDomainError',
    'ParticleLifecycleError',
    'ParticleStore',
    'Simulation',
    'SmoothingKernel',
    'SolverError',
    'StepReport',
    'bidirectional_step',
    'compute_rates',
    'compute_step_sizes',
    'density_reinit',
    'identify_inflow_members',
    'inflow_step',
    'kernel_gradient_magnitude',
    'kernel_value',
    'local_candidates',
    'make_frame_2d',
    'make_frame_3d',
    'outflow_step',
    'refresh_members',
    'riemann_star',
    'rotate_emitter',
    'run_structural_phase',
    'to_global_recycled',
    'to_local',
    'tvf_advection_velocity',
]
