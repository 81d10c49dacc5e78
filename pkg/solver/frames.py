"""
Local coordinate frames at in-/outlets

A frame maps a global point r to local coordinates r' = M (r - origin).
The local +X' axis is the boundary normal of the in-/outlet; its global
direction is row 0 of M.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

AXIS_DEGENERACY_TOL = 1e-12

VectorLike = Union[Sequence[float], np.ndarray]


def rotation_matrix_2d(theta: float) -> np.ndarray:
    """Forward rotation with rows [cos, sin; -sin, cos]"""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def rodrigues_matrix(angle: float, axis: np.ndarray) -> np.ndarray:
    """Rotation by ``angle`` about the unit vector ``axis``: I + S sin + S^2 (1 - cos)"""
    skew = np.array(
        [
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ]
    )
    return np.identity(3) + skew * math.sin(angle) + skew @ skew * (1.0 - math.cos(angle))


@dataclass(frozen=True, eq=False)
class FrameTransform:
    """Immutable local coordinate system of one in-/outlet"""

    dim: int
    origin_global: np.ndarray
    matrix: np.ndarray
    theta: Optional[float] = None
    axis_unit_global: np.ndarray = field(init=False)

    def __post_init__(self):
        origin = np.asarray(self.origin_global, dtype=float).reshape(self.dim)
        matrix = np.asarray(self.matrix, dtype=float).reshape(self.dim, self.dim)
        origin.flags.writeable = False
        matrix.flags.writeable = False
        object.__setattr__(self, 'origin_global', origin)
        object.__setattr__(self, 'matrix', matrix)
        axis = matrix[0].copy()
        axis.flags.writeable = False
        object.__setattr__(self, 'axis_unit_global', axis)

    @property
    def rotation(self) -> Union[float, np.ndarray]:
        """Signed angle in 2-D, rotation matrix in 3-D"""
        if self.dim == 2 and self.theta is not None:
            return self.theta
        return self.matrix

    def to_local(self, points: VectorLike) -> np.ndarray:
        """Forward map for one point (dim,) or many (N, dim)"""
        return (np.asarray(points, dtype=float) - self.origin_global) @ self.matrix.T

    def to_global(self, points_local: VectorLike) -> np.ndarray:
        """Inverse map r = M^T r' + origin"""
        return np.asarray(points_local, dtype=float) @ self.matrix + self.origin_global

    def vector_to_local(self, vectors: VectorLike) -> np.ndarray:
        return np.asarray(vectors, dtype=float) @ self.matrix.T

    def vector_to_global(self, vectors_local: VectorLike) -> np.ndarray:
        return np.asarray(vectors_local, dtype=float) @ self.matrix

    def rotated_2d(self, delta: float, center: VectorLike) -> "FrameTransform":
        """Frame turned anticlockwise by ``delta`` about ``center`` (2-D only)"""
        if self.dim != 2 or self.theta is None:
            raise ValueError("Only 2-D angle frames can be rotated")
        center = np.asarray(center, dtype=float)
        turn = rotation_matrix_2d(delta).T
        origin = center + turn @ (self.origin_global - center)
        return make_frame_2d(origin, self.theta + delta)

    def __repr__(self) -> str:
        return (
            f"FrameTransform(dim={self.dim}, origin={self.origin_global.tolist()}, "
            f"axis={self.axis_unit_global.tolist()})"
        )


def make_frame_2d(origin: VectorLike, theta: float, sign: int = 1) -> FrameTransform:
    """
    Build a 2-D frame rotated by ``theta`` from the global X axis.

    Args:
        origin: Global position of the local origin
        theta: Rotation magnitude in radians
        sign: +1 for anticlockwise, -1 for clockwise

    Returns:
        FrameTransform whose +X' axis points along (cos, sin) of the signed angle
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    signed_theta = sign * theta
    return FrameTransform(
        dim=2,
        origin_global=np.asarray(origin, dtype=float),
        matrix=rotation_matrix_2d(signed_theta),
        theta=signed_theta,
    )


def make_frame_3d(origin: VectorLike, target_axis: VectorLike) -> FrameTransform:
    """
    Build a 3-D frame whose local +X' axis is ``target_axis``.

    The rotation axis is the normalized cross product of the global X axis
    with the target and the angle lies in [0, pi]. A target parallel to +X
    gives the identity, a target parallel to -X a half turn about +Z.
    """
    target = np.asarray(target_axis, dtype=float).reshape(3)
    norm = np.linalg.norm(target)
    if norm <= 0.0:
        raise ValueError("Frame axis must be non-zero")
    target = target / norm

    x_hat = np.array([1.0, 0.0, 0.0])
    cross = np.cross(x_hat, target)
    cross_norm = np.linalg.norm(cross)
    if cross_norm < AXIS_DEGENERACY_TOL:
        if target[0] > 0.0:
            forward = np.identity(3)
        else:
            forward = np.diag([-1.0, -1.0, 1.0])
        logger.debug(f"🔄 Degenerate frame axis {target.tolist()}, using fixed convention")
    else:
        angle = math.acos(float(np.clip(target[0], -1.0, 1.0)))
        # rodrigues takes X to the target; the forward map is its inverse
        forward = rodrigues_matrix(angle, cross / cross_norm).T

    return FrameTransform(dim=3, origin_global=np.asarray(origin, dtype=float), matrix=forward)


def to_local(frame: FrameTransform, p_global: VectorLike) -> np.ndarray:
    return frame.to_local(p_global)


def to_global_recycled(
    frame: FrameTransform, p_local: VectorLike, shift: VectorLike
) -> np.ndarray:
    """Global position of a local point moved back by ``shift``"""
    return frame.to_global(np.asarray(p_local, dtype=float) - np.asarray(shift, dtype=float))


def rotate_vector_to_global(frame: FrameTransform, v_local: VectorLike) -> np.ndarray:
    return frame.vector_to_global(v_local)
