"""
Profile extraction and error metrics
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from solver.exceptions import OracleDomainError
from solver.frames import FrameTransform
from solver.kernel import SmoothingKernel
from solver.particles import WALL, ParticleStore

logger = logging.getLogger(__name__)

NEAR_WALL_FRACTION = 0.01


def rmsep(analytic: np.ndarray, numeric: np.ndarray, scale: Optional[float] = None) -> float:
    """
    Root mean square of the pointwise relative errors.

    With ``scale`` the errors are relative to that single magnitude instead.
    """
    analytic = np.asarray(analytic, dtype=float)
    numeric = np.asarray(numeric, dtype=float)
    if analytic.shape != numeric.shape:
        raise ValueError(f"Profile lengths differ: {analytic.shape} vs {numeric.shape}")
    if analytic.size == 0:
        raise ValueError("Empty profile")
    if scale is not None:
        if not scale > 0:
            raise OracleDomainError(f"Error scale must be positive, got {scale}")
        return float(np.sqrt(np.mean(((analytic - numeric) / scale) ** 2)))
    if np.any(analytic == 0.0):
        raise OracleDomainError("Reference profile has zero samples; filter them first")
    return float(np.sqrt(np.mean(((analytic - numeric) / analytic) ** 2)))


def filter_reference_samples(
    analytic: np.ndarray, *arrays: np.ndarray, fraction: float = NEAR_WALL_FRACTION
) -> Tuple[np.ndarray, ...]:
    """Drop samples whose reference magnitude is below ``fraction`` of its peak"""
    analytic = np.asarray(analytic, dtype=float)
    peak = np.max(np.abs(analytic)) if analytic.size else 0.0
    keep = np.abs(analytic) >= fraction * peak
    if peak == 0.0:
        keep = np.zeros_like(keep)
    return (analytic[keep],) + tuple(np.asarray(a)[keep] for a in arrays)


@dataclass
class ProfileSamples:
    """Binned axial velocity across one cross-section"""

    coordinate: np.ndarray
    velocity: np.ndarray
    counts: np.ndarray
    radial: bool = False

    def __len__(self) -> int:
        return len(self.coordinate)


def extract_profile(
    store: ParticleStore,
    frame: FrameTransform,
    x_station: float,
    n_bins: int,
    half_width: float,
    dp: float,
    kernel: Optional[SmoothingKernel] = None,
    radial: bool = False,
) -> ProfileSamples:
    """
    Kernel-weighted mean axial velocity of particles with |X' - x_station| < dp.

    Args:
        store: Particle store
        frame: Frame of the cross-section, +X' along the flow
        x_station: Local X' of the section
        n_bins: Number of bins across [-half_width, half_width] (or [0, half_width] if radial)
        half_width: Half channel width or pipe radius
        dp: Particle spacing
        kernel: Weights by axial distance to the section; uniform when None
        radial: Bin by sqrt(Y'^2 + Z'^2) instead of Y'

    Returns:
        ProfileSamples with empty bins dropped
    """
    candidates = np.flatnonzero(store.alive & (store.label != WALL))
    local = frame.to_local(store.position[candidates])
    near = np.abs(local[:, 0] - x_station) < dp
    local = local[near]
    axial = store.velocity[candidates[near]] @ frame.axis_unit_global

    if radial:
        coord = np.sqrt(np.sum(local[:, 1:] ** 2, axis=1))
        edges = np.linspace(0.0, half_width, n_bins + 1)
    else:
        coord = local[:, 1]
        edges = np.linspace(-half_width, half_width, n_bins + 1)

    if kernel is not None:
        weights = kernel.value(np.abs(local[:, 0] - x_station))
    else:
        weights = np.ones(len(coord))
    inside = (coord >= edges[0]) & (coord < edges[-1])
    bins = np.clip(np.digitize(coord[inside], edges) - 1, 0, n_bins - 1)
    w_sum = np.bincount(bins, weights=weights[inside], minlength=n_bins)
    v_sum = np.bincount(bins, weights=weights[inside] * axial[inside], minlength=n_bins)
    counts = np.bincount(bins, minlength=n_bins)

    centers = 0.5 * (edges[:-1] + edges[1:])
    filled = w_sum > 0
    if not np.all(filled):
        logger.warning(f"⚠️ {int(np.count_nonzero(~filled))} empty profile bins dropped at X'={x_station:g}")
    return ProfileSamples(
        coordinate=centers[filled],
        velocity=v_sum[filled] / w_sum[filled],
        counts=counts[filled],
        radial=radial,
    )
