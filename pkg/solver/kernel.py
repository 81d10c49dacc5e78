"""
Wendland C2 smoothing kernel with compact support 2h
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import KernelDomainError

ArrayLike = Union[float, np.ndarray]

DEFAULT_SMOOTHING_RATIO = 1.3


@dataclass(frozen=True)
class SmoothingKernel:
    """Wendland C2 kernel W(r) = alpha_d (1 - q/2)^4 (2q + 1), q = r/h"""

    h: float
    dim: int = 2

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError(f"Kernel dimension must be 2 or 3, got {self.dim}")
        if self.h <= 0.0:
            raise ValueError(f"Smoothing length must be positive, got {self.h}")

    @classmethod
    def from_spacing(
        cls, dp: float, dim: int = 2, ratio: float = DEFAULT_SMOOTHING_RATIO
    ) -> "SmoothingKernel":
        """Build a kernel with h = ratio * dp"""
        return cls(h=ratio * dp, dim=dim)

    @property
    def support_radius(self) -> float:
        return 2.0 * self.h

    @property
    def alpha(self) -> float:
        """Normalization constant alpha_d"""
        if self.dim == 2:
            return 7.0 / (4.0 * math.pi * self.h ** 2)
        return 21.0 / (16.0 * math.pi * self.h ** 3)

    def value(self, r: ArrayLike) -> ArrayLike:
        """Kernel value W(r)"""
        r_arr = np.asarray(r, dtype=float)
        if np.any(r_arr < 0.0):
            raise KernelDomainError("Kernel radius must be non-negative")
        q = r_arr / self.h
        inside = q < 2.0
        s = np.where(inside, 1.0 - 0.5 * q, 0.0)
        w = self.alpha * s ** 4 * (2.0 * q + 1.0)
        w = np.where(inside, w, 0.0)
        return float(w) if np.ndim(w) == 0 else w

    def gradient_magnitude(self, r: ArrayLike) -> ArrayLike:
        """Radial derivative dW/dr; zero at r = 0 and beyond the support"""
        r_arr = np.asarray(r, dtype=float)
        if np.any(r_arr < 0.0):
            raise KernelDomainError("Kernel radius must be non-negative")
        q = r_arr / self.h
        inside = q < 2.0
        s = np.where(inside, 1.0 - 0.5 * q, 0.0)
        dw = -5.0 * q * s ** 3 * self.alpha / self.h
        dw = np.where(inside, dw, 0.0)
        return float(dw) if np.ndim(dw) == 0 else dw

    def reference_sum(self, dp: float) -> float:
        """Sum of W over a full uniform lattice of spacing dp, self term included"""
        reach = int(math.ceil(self.support_radius / dp))
        axis = np.arange(-reach, reach + 1, dtype=float) * dp
        grids = np.meshgrid(*([axis] * self.dim), indexing="ij")
        r = np.sqrt(sum(g ** 2 for g in grids))
        return float(np.sum(self.value(r)))


def kernel_value(r: ArrayLike, kernel: SmoothingKernel) -> ArrayLike:
    return kernel.value(r)


def kernel_gradient_magnitude(r: ArrayLike, kernel: SmoothingKernel) -> ArrayLike:
    return kernel.gradient_magnitude(r)
