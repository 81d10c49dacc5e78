"""
Local-frame velocity profiles for velocity boundary conditions

A profile maps member positions in buffer coordinates to buffer-frame
velocities; only the X' component is non-zero for the profiles below.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Union

import numpy as np

from solver.exceptions import ConfigurationError

from .drivers import TimeDriver, make_driver

ArrayLike = Union[float, np.ndarray]


def poiseuille_inlet_profile(y: ArrayLike, d: float, dP: float, eta: float, L: float) -> ArrayLike:
    """Plane Poiseuille velocity (dP / 2 eta L)(d/2 - y)(d/2 + y), zero outside the channel"""
    y_arr = np.asarray(y, dtype=float)
    half = d / 2.0
    v = dP / (2.0 * eta * L) * (half - y_arr) * (half + y_arr)
    v = np.where(np.abs(y_arr) <= half, v, 0.0)
    return float(v) if v.ndim == 0 else v


def poiseuille_peak(d: float, dP: float, eta: float, L: float) -> float:
    """Centerline speed dP d^2 / (8 eta L)"""
    return dP * d * d / (8.0 * eta * L)


def transverse_radius(local: np.ndarray) -> np.ndarray:
    """|Y'| in 2-D, sqrt(Y'^2 + Z'^2) in 3-D"""
    local = np.atleast_2d(local)
    return np.sqrt(np.sum(local[:, 1:] ** 2, axis=1))


class VelocityProfile(ABC):
    """Prescribed buffer-frame velocity, optionally modulated in time"""

    def __init__(self, modulation: Optional[TimeDriver] = None):
        self.modulation = modulation

    @abstractmethod
    def axial(self, local: np.ndarray) -> np.ndarray:
        """X' speed at local positions (N, dim)"""

    def __call__(self, local: np.ndarray, t: float = 0.0) -> np.ndarray:
        local = np.atleast_2d(local)
        factor = self.modulation(t) if self.modulation is not None else 1.0
        velocity = np.zeros_like(local, dtype=float)
        velocity[:, 0] = factor * self.axial(local)
        return velocity

    @property
    def peak(self) -> float:
        return 0.0


class ParabolicProfile(VelocityProfile):
    """peak (1 - (r/R)^2) with r the transverse distance, zero for r > R"""

    def __init__(self, radius: float, peak: float = 1.0, modulation: Optional[TimeDriver] = None):
        super().__init__(modulation)
        if radius <= 0:
            raise ConfigurationError("Profile radius must be positive")
        self.radius = radius
        self._peak = peak

    @property
    def peak(self) -> float:
        return self._peak

    def axial(self, local: np.ndarray) -> np.ndarray:
        r = transverse_radius(local)
        return np.where(r <= self.radius, self._peak * (1.0 - (r / self.radius) ** 2), 0.0)


class PoiseuilleProfile(ParabolicProfile):
    """Plane Poiseuille profile from the pressure drop over a channel"""

    def __init__(self, d: float, dP: float, eta: float, L: float, modulation: Optional[TimeDriver] = None):
        super().__init__(radius=d / 2.0, peak=poiseuille_peak(d, dP, eta, L), modulation=modulation)
        self.d, self.dP, self.eta, self.L = d, dP, eta, L


class PlugProfile(VelocityProfile):
    """Uniform speed over the cross-section"""

    def __init__(self, speed: float = 1.0, modulation: Optional[TimeDriver] = None):
        super().__init__(modulation)
        self.speed = speed

    @property
    def peak(self) -> float:
        return self.speed

    def axial(self, local: np.ndarray) -> np.ndarray:
        return np.full(np.atleast_2d(local).shape[0], self.speed)


def make_profile(config: Dict[str, Any], fluid: Optional[Dict[str, float]] = None) -> VelocityProfile:
    """
    Build a profile from a scenario mapping.

    Args:
        config: One key among ``parabolic``, ``poiseuille``, ``plug`` with
            its parameters; an optional ``modulation`` driver
        fluid: Fluid parameters used by the Poiseuille profile (eta)

    Returns:
        VelocityProfile instance
    """
    modulation = make_driver(config['modulation']) if 'modulation' in config else None
    try:
        if 'parabolic' in config:
            params = config['parabolic']
            return ParabolicProfile(float(params['R']), float(params.get('peak', 1.0)), modulation)
        if 'poiseuille' in config:
            params = config['poiseuille']
            eta = float(params.get('eta', (fluid or {}).get('eta', 0.0)))
            return PoiseuilleProfile(float(params['d']), float(params['dP']), eta, float(params['L']), modulation)
        if 'plug' in config:
            params = config['plug'] or {}
            if 'fourier' in params:
                return PlugProfile(1.0, make_driver({'fourier': params['fourier'] or {}}))
            return PlugProfile(float(params.get('speed', 1.0)), modulation)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ConfigurationError(f"Invalid velocity profile {config!r}: {e}") from e
    raise ConfigurationError(f"Unknown velocity profile {config!r}")
