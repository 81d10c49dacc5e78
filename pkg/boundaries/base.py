"""
Base Boundary Condition Abstract Class
"""

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Any, Dict
import logging

import numpy as np

from solver.particles import FluidProperties, ParticleStore

if TYPE_CHECKING:
    from solver.buffers import BufferZone

logger = logging.getLogger(__name__)


class BoundaryCondition(ABC):
    """Abstract base class for buffer boundary conditions"""

    def __init__(self, config: Dict[str, Any]):
        """
        Initialize the boundary condition with configuration

        Args:
            config: Buffer ``bc`` mapping from the scenario file
        """
        self.config = config
        self.bc_type = config.get('type')

    @abstractmethod
    def boundary_pressure(
        self, buffer: "BufferZone", store: ParticleStore, members: np.ndarray, t: float
    ) -> np.ndarray:
        """
        Pressure p_b used in the momentum correction of each member

        Args:
            buffer: Owning buffer
            store: Particle store
            members: Member slots
            t: Current time

        Returns:
            Array of boundary pressures aligned with ``members``
        """
        pass

    @abstractmethod
    def apply(self, buffer: "BufferZone", store: ParticleStore, t: float) -> None:
        """Impose the condition on member velocities after the velocity update"""
        pass

    def on_recycle(
        self, store: ParticleStore, indices: np.ndarray, t: float, props: FluidProperties
    ) -> None:
        """Set the state of members moved back by one buffer depth"""

    def advance(self, buffer: "BufferZone", store: ParticleStore, dt: float, t: float, dp: float) -> None:
        """Advance internal state once per advection step"""

    def describe(self) -> str:
        return f"{self.bc_type}"
