"""
Arbitrary-positioned inflow, outflow and bidirectional buffer zones

Every buffer works in its own local frame, so crossing tests reduce to
comparing X' with the half depth a/2. Membership is the particle label:
a particle belongs to buffer k iff its label is k.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ConfigurationError
from .frames import FrameTransform, rotation_matrix_2d, to_global_recycled
from .neighbors import CellGrid, LocalCellSet, local_candidates
from .particles import FLUID, WALL, FluidProperties, ParticleStore

if TYPE_CHECKING:
    from boundaries.base import BoundaryCondition

logger = logging.getLogger(__name__)

MIN_BUFFER_LAYERS = 3


class BufferKind(str, Enum):
    INFLOW = 'inflow'
    OUTFLOW = 'outflow'
    BIDIRECTIONAL = 'bidirectional'


@dataclass
class EmitterRotation:
    """Frame angle theta(t) = omega t + theta0 about ``center``"""

    omega: float
    theta0: float
    center: np.ndarray

    def angle(self, t: float) -> float:
        return self.omega * t + self.theta0


@dataclass
class BufferZone:
    """
    One open-boundary buffer.

    For inflow and bidirectional buffers +X' points into the domain, along
    the inflow direction. For outflow buffers +X' points out of the domain.
    """

    id: int
    kind: BufferKind
    frame: FrameTransform
    extents: Tuple[float, ...]
    bc: Optional["BoundaryCondition"] = None
    local_cells: Optional[LocalCellSet] = None
    rotation: Optional[EmitterRotation] = None
    name: str = ''
    last_spawned: int = field(default=0, init=False)
    last_deleted: int = field(default=0, init=False)

    def __post_init__(self):
        if self.id < 1:
            raise ConfigurationError(f"Buffer id must be a positive integer, got {self.id}")
        if len(self.extents) != self.frame.dim:
            raise ConfigurationError(
                f"Buffer {self.id} needs {self.frame.dim} extents, got {len(self.extents)}"
            )
        self.kind = BufferKind(self.kind)
        if self.rotation is not None and self.kind != BufferKind.INFLOW:
            raise ConfigurationError(f"Only inflow buffers can rotate (buffer {self.id})")

    @property
    def depth(self) -> float:
        return self.extents[0]

    @property
    def half_extents(self) -> np.ndarray:
        return np.asarray(self.extents, dtype=float) / 2.0

    @property
    def recycle_shift(self) -> np.ndarray:
        shift = np.zeros(self.frame.dim)
        shift[0] = self.depth
        return shift

    def in_box(self, local: np.ndarray) -> np.ndarray:
        """Strict box test on local coordinates"""
        return np.all(np.abs(np.atleast_2d(local)) < self.half_extents, axis=1)

    def members(self, store: ParticleStore) -> np.ndarray:
        return store.members(self.id)

    def update_local_cells(self, grid: CellGrid) -> None:
        self.local_cells = LocalCellSet.from_box(grid, self.id, self.frame, self.extents)

    def check_depth(self, dp: float) -> None:
        if self.depth < MIN_BUFFER_LAYERS * dp * (1.0 - 1e-9):
            raise ConfigurationError(
                f"Buffer {self.id} depth {self.depth:g} m is below {MIN_BUFFER_LAYERS} layers of dp={dp:g}"
            )


def identify_inflow_members(buffer: BufferZone, store: ParticleStore) -> int:
    """Label every fluid particle inside the box as a member (full scan, setup only)"""
    fluid = np.flatnonzero(store.alive & (store.label == FLUID))
    inside = fluid[buffer.in_box(buffer.frame.to_local(store.position[fluid]))]
    if inside.size == 0:
        raise ConfigurationError(f"Buffer {buffer.id} contains no fluid particles")
    store.relabel(inside, buffer.id)
    logger.debug(f"✅ Buffer {buffer.id} ({buffer.kind.value}) identified {inside.size} members")
    return int(inside.size)


def _spawn_and_recycle(
    buffer: BufferZone, store: ParticleStore, members: np.ndarray, local: np.ndarray,
    t: float, props: Optional[FluidProperties],
) -> int:
    crossing = local[:, 0] > buffer.depth / 2.0
    if not np.any(crossing):
        return 0
    movers = members[crossing]
    store.spawn_duplicates(movers, time=t)
    store.position[movers] = to_global_recycled(buffer.frame, local[crossing], buffer.recycle_shift)
    if buffer.bc is not None and props is not None:
        buffer.bc.on_recycle(store, movers, t, props)
    return int(movers.size)


def _warn_sideways(buffer: BufferZone, local: np.ndarray) -> None:
    if buffer.frame.dim < 2 or local.size == 0:
        return
    sideways = np.any(np.abs(local[:, 1:]) >= buffer.half_extents[1:], axis=1)
    if np.any(sideways):
        logger.warning(f"⚠️ {int(np.count_nonzero(sideways))} members of inflow buffer {buffer.id} left the box sideways")


def inflow_step(
    buffer: BufferZone, store: ParticleStore, t: float = 0.0, props: Optional[FluidProperties] = None
) -> int:
    """Duplicate members that crossed X' > a/2 and move them back by a; returns spawned count"""
    members = buffer.members(store)
    local = buffer.frame.to_local(store.position[members])
    _warn_sideways(buffer, local)
    spawned = _spawn_and_recycle(buffer, store, members, local, t, props)
    buffer.last_spawned = spawned
    return spawned


def outflow_step(buffer: BufferZone, store: ParticleStore, grid: CellGrid) -> int:
    """Delete local candidates past X' > a/2; returns deleted count"""
    if buffer.local_cells is None:
        buffer.update_local_cells(grid)
    candidates = local_candidates(grid, buffer.local_cells)
    candidates = candidates[store.alive[candidates] & (store.label[candidates] != WALL)]
    local = buffer.frame.to_local(store.position[candidates])
    leaving = candidates[local[:, 0] > buffer.depth / 2.0]
    deleted = store.delete_particles(leaving)
    buffer.last_deleted = deleted
    return deleted


def refresh_members(buffer: BufferZone, store: ParticleStore, grid: CellGrid) -> None:
    """
    Capture fluid particles that entered the box and release members that
    left it. Inflow buffers keep their setup membership.
    """
    if buffer.kind == BufferKind.INFLOW:
        return
    members = buffer.members(store)
    if members.size:
        outside = ~buffer.in_box(buffer.frame.to_local(store.position[members]))
        store.relabel(members[outside], FLUID)

    if buffer.local_cells is None:
        buffer.update_local_cells(grid)
    candidates = local_candidates(grid, buffer.local_cells)
    candidates = candidates[store.alive[candidates] & (store.label[candidates] == FLUID)]
    if candidates.size:
        inside = buffer.in_box(buffer.frame.to_local(store.position[candidates]))
        store.relabel(candidates[inside], buffer.id)


def bidirectional_step(
    buffer: BufferZone, store: ParticleStore, grid: CellGrid, t: float = 0.0,
    props: Optional[FluidProperties] = None,
) -> Tuple[int, int]:
    """Spawn and recycle at X' > a/2, delete at X' < -a/2; returns (spawned, deleted)"""
    members = buffer.members(store)
    local = buffer.frame.to_local(store.position[members])
    spawned = _spawn_and_recycle(buffer, store, members, local, t, props)

    # recycled members sit at X' > -a/2, so the deletion set is disjoint
    leaving = members[local[:, 0] < -buffer.depth / 2.0]
    deleted = store.delete_particles(leaving)
    buffer.last_spawned = spawned
    buffer.last_deleted = deleted
    return spawned, deleted


def rotate_emitter(
    buffer: BufferZone, store: ParticleStore, t: float, grid: Optional[CellGrid] = None
) -> float:
    """
    Turn a rotating inflow buffer to theta(t) and re-establish its frame.

    Members are rotated with the frame: positions about the center and
    velocities by the same angle. Returns the applied angle increment.
    """
    if buffer.rotation is None:
        return 0.0
    if buffer.kind != BufferKind.INFLOW:
        raise ConfigurationError(f"Only inflow buffers can rotate (buffer {buffer.id})")
    delta = buffer.rotation.angle(t) - buffer.frame.theta
    if delta == 0.0:
        return 0.0

    center = np.asarray(buffer.rotation.center, dtype=float)
    turn = rotation_matrix_2d(delta).T
    members = buffer.members(store)
    store.position[members] = (store.position[members] - center) @ turn.T + center
    store.velocity[members] = store.velocity[members] @ turn.T
    store.advection_velocity[members] = store.advection_velocity[members] @ turn.T

    buffer.frame = buffer.frame.rotated_2d(delta, center)
    if grid is not None:
        buffer.update_local_cells(grid)
    return delta


def run_structural_phase(
    buffers: Sequence[BufferZone], store: ParticleStore, grid: CellGrid, t: float,
    props: Optional[FluidProperties] = None,
) -> Tuple[int, int]:
    """Generation for inflow/bidirectional, then deletion for outflow, then emitter rotation"""
    spawned = deleted = 0
    ordered = sorted(buffers, key=lambda b: b.id)
    for buffer in ordered:
        buffer.last_spawned = buffer.last_deleted = 0
    for buffer in ordered:
        if buffer.kind == BufferKind.INFLOW:
            spawned += inflow_step(buffer, store, t, props)
        elif buffer.kind == BufferKind.BIDIRECTIONAL:
            s, d = bidirectional_step(buffer, store, grid, t, props)
            spawned += s
            deleted += d
    for buffer in ordered:
        if buffer.kind == BufferKind.OUTFLOW:
            deleted += outflow_step(buffer, store, grid)
    for buffer in ordered:
        if buffer.rotation is not None:
            rotate_emitter(buffer, store, t, grid)
    return spawned, deleted
