"""
Three-element (RCR) Windkessel outlet model

    (1 + Rp/Rd) Q + C Rp dQ/dt = P/Rd + C dP/dt

Parameters are tabulated in CGS units and converted to SI on load.
"""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Dict

import numpy as np

from solver.exceptions import ConfigurationError
from solver.particles import ParticleStore

if TYPE_CHECKING:
    from solver.buffers import BufferZone

logger = logging.getLogger(__name__)

# dyn s/cm^5 -> Pa s/m^3
RESISTANCE_CGS_TO_SI = 1e5
# cm^5/dyn -> m^3/Pa
COMPLIANCE_CGS_TO_SI = 1e-5


def resistance_to_si(value_cgs: float) -> float:
    return value_cgs * RESISTANCE_CGS_TO_SI


def compliance_to_si(value_cgs: float) -> float:
    return value_cgs * COMPLIANCE_CGS_TO_SI


@dataclass(frozen=True)
class WindkesselParameters:
    """Rp, C, Rd in CGS units"""

    Rp: float
    C: float
    Rd: float


# Aortic branch outlets
AORTIC_OUTLETS: Dict[str, WindkesselParameters] = {
    'right_common_carotid': WindkesselParameters(Rp=1180.0, C=7.70e-5, Rd=18400.0),
    'right_subclavian': WindkesselParameters(Rp=1040.0, C=8.74e-5, Rd=16300.0),
    'left_common_carotid': WindkesselParameters(Rp=1180.0, C=7.70e-5, Rd=18400.0),
    'left_subclavian': WindkesselParameters(Rp=970.0, C=9.34e-5, Rd=15200.0),
    'descending_aorta': WindkesselParameters(Rp=188.0, C=4.82e-4, Rd=2950.0),
}


@dataclass
class WindkesselState:
    """Outlet state in SI units: Rp, Rd (Pa s/m^3), C (m^3/Pa), P (Pa), Q (m^3/s)"""

    Rp: float
    C: float
    Rd: float
    P: float = 0.0
    Q: float = 0.0
    Q_prev: float = 0.0

    def __post_init__(self):
        if self.Rp <= 0 or self.C <= 0 or self.Rd <= 0:
            raise ConfigurationError("Windkessel Rp, C and Rd must be positive")

    @classmethod
    def from_cgs(cls, params: WindkesselParameters, P0: float = 0.0) -> "WindkesselState":
        return cls(Rp=resistance_to_si(params.Rp), C=compliance_to_si(params.C), Rd=resistance_to_si(params.Rd), P=P0)

    @classmethod
    def from_config(cls, config: Any) -> "WindkesselState":
        """
        Build from a preset name or a mapping ``{Rp, C, Rd, units?, P0?}``.

        Units default to CGS.
        """
        if isinstance(config, str):
            if config not in AORTIC_OUTLETS:
                raise ConfigurationError(f"Unknown Windkessel preset '{config}'")
            return cls.from_cgs(AORTIC_OUTLETS[config])
        try:
            if 'preset' in config:
                state = cls.from_config(config['preset'])
                state.P = float(config.get('P0', 0.0))
                return state
            params = WindkesselParameters(Rp=float(config['Rp']), C=float(config['C']), Rd=float(config['Rd']))
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid Windkessel parameters: {e}") from e
        if config.get('units', 'cgs') == 'si':
            return cls(Rp=params.Rp, C=params.C, Rd=params.Rd, P=float(config.get('P0', 0.0)))
        return cls.from_cgs(params, P0=float(config.get('P0', 0.0)))

    def steady_pressure(self, Q: float) -> float:
        return (self.Rp + self.Rd) * Q

    def describe(self) -> str:
        return f"Rp={self.Rp:.3g} C={self.C:.3g} Rd={self.Rd:.3g}"


def windkessel_advance(state: WindkesselState, Q_new: float, dt: float) -> float:
    """
    Backward-Euler step in P with a finite-difference dQ/dt.

    Args:
        state: Outlet state, updated in place
        Q_new: Flow rate at the end of the step (m^3/s)
        dt: Step size (s)

    Returns:
        New outlet pressure (Pa)
    """
    if dt <= 0:
        raise ValueError("Windkessel step must be positive")
    dq_dt = (Q_new - state.Q) / dt
    rhs = state.C * state.P / dt + (1.0 + state.Rp / state.Rd) * Q_new + state.C * state.Rp * dq_dt
    state.P = rhs / (state.C / dt + 1.0 / state.Rd)
    state.Q_prev = state.Q
    state.Q = Q_new
    return state.P


def measure_flow_rate(buffer: "BufferZone", store: ParticleStore, dp: float) -> float:
    """
    Layer-averaged volume flux through the buffer along its +X' axis.

    Each member carries v_X' dp^(dim-1) through a cross-section. The
    members fill a/dp layers, so the sum over all of them is divided by
    that layer count: Q = sum(v_X') dp^(dim-1) dp / a. This is the mean
    flux over the slab, not a single-plane crossing count.
    """
    members = buffer.members(store)
    if members.size == 0:
        return 0.0
    axial = buffer.frame.vector_to_local(store.velocity[members])[:, 0]
    return float(np.sum(axial) * dp ** (store.dim - 1) * dp / buffer.depth)
