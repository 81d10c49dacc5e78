"""
Time drivers for boundary pressures and inflow amplitudes
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from solver.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FourierCoefficients:
    """v(t) = a0 + sum a_n cos(n w t) + b_n sin(n w t)"""

    a0: float
    a: Tuple[float, ...]
    b: Tuple[float, ...]
    omega: float

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError("Cosine and sine coefficient lists must have equal length")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega


# Aortic inflow velocity (m/s); the eighth sine term is listed twice as b7
# in the published table and is read as b8
AORTIC_INFLOW = FourierCoefficients(
    a0=0.3782,
    a=(-0.1812, 0.1276, -0.08981, 0.04347, -0.05412, 0.02642, 0.008946, -0.009005),
    b=(-0.07725, 0.01466, 0.04295, -0.06679, 0.05679, -0.01878, 0.01869, -0.01888),
    omega=8.302,
)


def fourier_inflow(t, coeffs: FourierCoefficients = AORTIC_INFLOW):
    """Evaluate the Fourier series at scalar or array time"""
    t_arr = np.asarray(t, dtype=float)
    n = np.arange(1, len(coeffs.a) + 1)
    phase = np.multiply.outer(t_arr, n) * coeffs.omega
    value = coeffs.a0 + np.cos(phase) @ np.asarray(coeffs.a) + np.sin(phase) @ np.asarray(coeffs.b)
    return float(value) if value.ndim == 0 else value


class TimeDriver(ABC):
    """Scalar function of time"""

    @abstractmethod
    def __call__(self, t: float) -> float:
        pass

    def describe(self) -> str:
        return type(self).__name__


@dataclass
class ConstantDriver(TimeDriver):
    value: float

    def __call__(self, t: float) -> float:
        return self.value

    def describe(self) -> str:
        return f"constant {self.value:g}"


@dataclass
class CosineDriver(TimeDriver):
    """offset + amplitude cos(omega t + phase)"""

    amplitude: float
    omega: float
    phase: float = 0.0
    offset: float = 0.0

    def __call__(self, t: float) -> float:
        return self.offset + self.amplitude * math.cos(self.omega * t + self.phase)

    def describe(self) -> str:
        return f"cosine {self.amplitude:g} cos({self.omega:g} t + {self.phase:g}) + {self.offset:g}"


@dataclass
class FourierDriver(TimeDriver):
    coeffs: FourierCoefficients = AORTIC_INFLOW
    scale: float = 1.0

    def __call__(self, t: float) -> float:
        return self.scale * fourier_inflow(t, self.coeffs)

    def describe(self) -> str:
        return f"fourier omega={self.coeffs.omega:g} scale={self.scale:g}"


def make_driver(config: Any) -> TimeDriver:
    """
    Build a driver from a scenario value.

    Args:
        config: A number (constant) or a mapping with one of the keys
            ``constant``, ``cosine`` or ``fourier``

    Returns:
        TimeDriver instance
    """
    if isinstance(config, (int, float)):
        return ConstantDriver(float(config))
    if not isinstance(config, dict) or len(config) != 1:
        raise ConfigurationError(f"Cannot build a time driver from {config!r}")

    kind, params = next(iter(config.items()))
    params = params if isinstance(params, dict) else {}
    try:
        if kind == 'constant':
            return ConstantDriver(float(config[kind] if not params else params['value']))
        if kind == 'cosine':
            return CosineDriver(
                amplitude=float(params['amplitude']),
                omega=float(params['omega']),
                phase=float(params.get('phase', 0.0)),
                offset=float(params.get('offset', 0.0)),
            )
        if kind == 'fourier':
            return FourierDriver(coeffs=_fourier_from_config(params), scale=float(params.get('scale', 1.0)))
    except (KeyError, TypeError, ValueError) as e:
        logger.error(f"❌ Invalid {kind} driver parameters: {str(e)}")
        raise ConfigurationError(f"Invalid {kind} driver parameters: {e}") from e
    raise ConfigurationError(f"Unknown time driver '{kind}'")


def _fourier_from_config(params: Dict[str, Any]) -> FourierCoefficients:
    table = params.get('table', 'aortic')
    if table == 'aortic':
        return AORTIC_INFLOW
    if isinstance(table, dict):
        return FourierCoefficients(
            a0=float(table['a0']),
            a=tuple(float(x) for x in table['a']),
            b=tuple(float(x) for x in table['b']),
            omega=float(table['omega']),
        )
    raise ConfigurationError(f"Unknown Fourier table '{table}'")
