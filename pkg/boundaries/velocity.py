"""
Velocity boundary condition
"""

import logging
from typing import TYPE_CHECKING, Any, Dict, Optional

import numpy as np

from solver.frames import rotate_vector_to_global
from solver.particles import ParticleStore

from .base import BoundaryCondition
from .profiles import VelocityProfile, make_profile

if TYPE_CHECKING:
    from solver.buffers import BufferZone

logger = logging.getLogger(__name__)


def apply_velocity_bc(
    buffer: "BufferZone",
    store: ParticleStore,
    v_profile: VelocityProfile,
    t: float = 0.0,
    members: Optional[np.ndarray] = None,
) -> None:
    """Overwrite member velocities with the profile rotated into the global frame"""
    if members is None:
        members = buffer.members(store)
    if members.size == 0:
        return
    local = buffer.frame.to_local(store.position[members])
    store.velocity[members] = rotate_vector_to_global(buffer.frame, v_profile(local, t))
    store.advection_velocity[members] = store.velocity[members]


class VelocityBC(BoundaryCondition):
    """Prescribed local-frame profile; density and pressure evolve freely"""

    def __init__(self, config: Dict[str, Any]):
        super().__init__(config)
        self.profile = make_profile(config.get('profile', {}), config.get('fluid'))

    def boundary_pressure(self, buffer, store, members, t):
        return store.pressure[members].copy()

    def apply(self, buffer, store, t):
        apply_velocity_bc(buffer, store, self.profile, t)

    def describe(self) -> str:
        return f"velocity {type(self.profile).__name__} peak={self.profile.peak:g}"
