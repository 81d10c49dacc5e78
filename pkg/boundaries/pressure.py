"""
Pressure boundary condition
"""

import logging
from typing import Any, Dict, Optional

import numpy as np

from solver.buffers import BufferKind, BufferZone
from solver.particles import FluidProperties, ParticleStore
from solver.wcsph import eos_density, eos_pressure

from .base import BoundaryCondition
from .drivers import make_driver
from .windkessel import WindkesselState, measure_flow_rate, windkessel_advance

logger = logging.getLogger(__name__)


def apply_pressure_bc(buffer: BufferZone, store: ParticleStore, members: Optional[np.ndarray] = None) -> None:
    """Project member velocities onto the buffer normal: v = (v . u) u"""
    if members is None:
        members = buffer.members(store)
    if members.size == 0:
        return
    axis = buffer.frame.axis_unit_global
    axial = store.velocity[members] @ axis
    store.velocity[members] = axial[:, None] * axis
    store.advection_velocity[members] = store.velocity[members]


class PressureBC(BoundaryCondition):
    """
    Prescribed boundary pressure p_b.

    ``p_b`` is a constant, a time driver mapping, or a ``windkessel``
    mapping whose outlet pressure follows the measured flow rate.
    """

    def __init__(self, config: Dict[str, Any]):
        super().__init__(config)
        p_b = config.get('p_b', 0.0)
        self.windkessel: Optional[WindkesselState] = None
        self.driver = None
        if isinstance(p_b, dict) and 'windkessel' in p_b:
            self.windkessel = WindkesselState.from_config(p_b['windkessel'])
        else:
            self.driver = make_driver(p_b)

    def pressure(self, t: float) -> float:
        if self.windkessel is not None:
            return self.windkessel.P
        return self.driver(t)

    def boundary_pressure(self, buffer, store, members, t):
        return np.full(len(members), self.pressure(t))

    def apply(self, buffer, store, t):
        apply_pressure_bc(buffer, store)

    def on_recycle(self, store: ParticleStore, indices: np.ndarray, t: float, props: FluidProperties) -> None:
        store.density[indices] = eos_density(self.pressure(t), props)
        store.pressure[indices] = eos_pressure(store.density[indices], props)

    def advance(self, buffer, store, dt, t, dp):
        if self.windkessel is None:
            return
        flow = measure_flow_rate(buffer, store, dp)
        # inflow-oriented buffers measure positive flow into the domain
        if buffer.kind != BufferKind.OUTFLOW:
            flow = -flow
        windkessel_advance(self.windkessel, flow, dt)
        logger.debug(f"🔄 Buffer {buffer.id} windkessel Q={flow:.4e} m3/s P={self.windkessel.P:.4e} Pa")

    def describe(self) -> str:
        if self.windkessel is not None:
            return f"pressure windkessel({self.windkessel.describe()})"
        return f"pressure {self.driver.describe()}"
