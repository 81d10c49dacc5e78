"""
Closed-form reference solutions

Plane and circular Poiseuille flow, Womersley pulsatile pipe flow and a
tightly-toleranced Windkessel reference integration.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import jv

from boundaries.profiles import poiseuille_inlet_profile, poiseuille_peak
from boundaries.windkessel import WindkesselState
from solver.exceptions import OracleDomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

__all__ = [
    'WomersleyParams',
    'bessel_j0',
    'channel_poiseuille',
    'hagen_poiseuille_flow_rate',
    'pipe_poiseuille',
    'poiseuille_peak',
    'quasi_steady_velocity',
    'windkessel_reference',
    'womersley_velocity',
]


def bessel_j0(z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
    """J0 of a complex argument"""
    return jv(0, z)


def channel_poiseuille(y: ArrayLike, d: float, dP: float, eta: float, L: float) -> ArrayLike:
    return poiseuille_inlet_profile(y, d, dP, eta, L)


def pipe_poiseuille(r: ArrayLike, R: float, gradient: float, eta: float) -> ArrayLike:
    """Axial speed -G (R^2 - r^2) / (4 eta) for pressure gradient G"""
    r_arr = np.asarray(r, dtype=float)
    v = -gradient * (R * R - r_arr * r_arr) / (4.0 * eta)
    return float(v) if v.ndim == 0 else v


def hagen_poiseuille_flow_rate(R: float, dP: float, eta: float, L: float) -> float:
    """pi R^4 dP / (8 eta L)"""
    return math.pi * R ** 4 * dP / (8.0 * eta * L)


@dataclass(frozen=True)
class WomersleyParams:
    """
    Pulsatile pipe flow driven by dp/dx(t) = G0 + Re sum P'_n exp(i n omega t).

    ``harmonics`` holds (n, P'_n) with n >= 1; ``steady_gradient`` is G0.
    """

    R: float
    rho: float
    eta: float
    omega: float
    harmonics: Tuple[Tuple[int, complex], ...] = field(default_factory=tuple)
    steady_gradient: float = 0.0

    def __post_init__(self):
        if self.R <= 0 or self.rho <= 0 or self.eta <= 0 or self.omega <= 0:
            raise ValueError("Womersley parameters must be positive")
        if any(n < 1 for n, _ in self.harmonics):
            raise ValueError("Harmonic orders must be at least 1")

    @property
    def alpha(self) -> float:
        """Womersley number R sqrt(omega rho / eta)"""
        return self.R * math.sqrt(self.omega * self.rho / self.eta)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def gradient(self, t: float) -> float:
        total = complex(self.steady_gradient)
        for n, amplitude in self.harmonics:
            total += amplitude * cmath.exp(1j * n * self.omega * t)
        return total.real


def _check_radius(r: np.ndarray, R: float) -> None:
    if np.any(r < 0) or np.any(r > R * (1.0 + 1e-12)):
        raise OracleDomainError(f"Radius must lie in [0, {R:g}]")


def womersley_velocity(r: ArrayLike, t: float, params: WomersleyParams) -> ArrayLike:
    """Axial velocity at radius r and time t"""
    r_arr = np.asarray(r, dtype=float)
    _check_radius(r_arr, params.R)
    flat = np.atleast_1d(r_arr).ravel()
    r_hat = np.minimum(flat / params.R, 1.0)

    velocity = np.asarray(pipe_poiseuille(flat, params.R, params.steady_gradient, params.eta), dtype=float)
    i_three_halves = cmath.exp(0.75j * math.pi)
    for n, amplitude in params.harmonics:
        z_wall = params.alpha * math.sqrt(n) * i_three_halves
        coeff = 1j * amplitude / (params.rho * n * params.omega)
        phase = cmath.exp(1j * n * params.omega * t)
        shape = 1.0 - bessel_j0(z_wall * r_hat) / bessel_j0(z_wall)
        velocity = velocity + (coeff * shape * phase).real

    velocity = velocity.reshape(np.shape(r_arr))
    return float(velocity) if velocity.ndim == 0 else velocity


def quasi_steady_velocity(r: ArrayLike, t: float, params: WomersleyParams) -> ArrayLike:
    """Poiseuille profile following the instantaneous gradient (small-alpha limit)"""
    r_arr = np.asarray(r, dtype=float)
    _check_radius(r_arr, params.R)
    return pipe_poiseuille(r_arr, params.R, params.gradient(t), params.eta)


def windkessel_reference(
    flow: Callable[[float], float],
    flow_derivative: Callable[[float], float],
    state: WindkesselState,
    t_eval: Sequence[float],
    rtol: float = 1e-10,
) -> np.ndarray:
    """
    Outlet pressure from an adaptive Runge-Kutta integration of
    C dP/dt = (1 + Rp/Rd) Q + C Rp dQ/dt - P/Rd, starting from ``state.P``.
    """
    t_eval = np.asarray(t_eval, dtype=float)

    def rhs(t, y):
        return [((1.0 + state.Rp / state.Rd) * flow(t) + state.C * state.Rp * flow_derivative(t) - y[0] / state.Rd) / state.C]

    solution = solve_ivp(
        rhs, (float(t_eval[0]), float(t_eval[-1])), [state.P],
        method='DOP853', t_eval=t_eval, rtol=rtol, atol=1e-8,
    )
    if not solution.success:
        raise RuntimeError(f"Windkessel reference integration failed: {solution.message}")
    return solution.y[0]
