"""
Particle data model, labels and lifecycle
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Union

import numpy as np

from .exceptions import ParticleLifecycleError

logger = logging.getLogger(__name__)

FLUID = 0
WALL = -1

IndexLike = Union[int, Sequence[int], np.ndarray]


def is_buffer_label(label: int) -> bool:
    """Buffer(id) labels are the positive buffer ids"""
    return label >= 1


def label_name(label: int) -> str:
    if label == FLUID:
        return "Fluid"
    if label == WALL:
        return "Wall"
    return f"Buffer({label})"


@dataclass(frozen=True)
class FluidProperties:
    """Reference density, artificial sound speed and dynamic viscosity"""

    rho0: float
    c0: float
    eta: float

    def __post_init__(self):
        if self.rho0 <= 0 or self.c0 <= 0:
            raise ValueError("rho0 and c0 must be positive")
        if self.eta < 0:
            raise ValueError("eta must be non-negative")

    @classmethod
    def from_max_velocity(cls, rho0: float, u_max: float, eta: float) -> "FluidProperties":
        """Sound speed set to ten times the anticipated maximum speed"""
        return cls(rho0=rho0, c0=10.0 * u_max, eta=eta)

    @property
    def nu(self) -> float:
        return self.eta / self.rho0


class ParticleStore:
    """
    Struct-of-arrays particle container.

    Rows are particle slots; deleted particles stay in place with
    ``alive = False`` until :meth:`compact` removes them, so indices are
    stable inside one structural phase.
    """

    VECTOR_FIELDS = ('position', 'velocity', 'advection_velocity', 'acceleration')
    SCALAR_FIELDS = ('density', 'pressure', 'mass', 'density_rate', 'birth_time')

    def __init__(self, dim: int):
        if dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {dim}")
        self.dim = dim
        for name in self.VECTOR_FIELDS:
            setattr(self, name, np.zeros((0, dim)))
        for name in self.SCALAR_FIELDS:
            setattr(self, name, np.zeros(0))
        self.label = np.zeros(0, dtype=np.int64)
        self.ids = np.zeros(0, dtype=np.int64)
        self.alive = np.zeros(0, dtype=bool)
        self.near_boundary = np.zeros(0, dtype=bool)

        self._next_id = 0
        self.initial_count = 0
        self.generated = 0
        self.deleted = 0

    def __len__(self) -> int:
        return len(self.label)

    @property
    def n_alive(self) -> int:
        return int(np.count_nonzero(self.alive))

    def add_particles(
        self,
        positions: np.ndarray,
        label: Union[int, np.ndarray],
        mass: Union[float, np.ndarray],
        density: Union[float, np.ndarray],
        velocity: Optional[np.ndarray] = None,
        pressure: Union[float, np.ndarray] = 0.0,
        time: float = 0.0,
    ) -> np.ndarray:
        """Append particles during scenario setup; returns the new indices"""
        positions = np.atleast_2d(np.asarray(positions, dtype=float))
        n = positions.shape[0]
        if velocity is None:
            velocity = np.zeros((n, self.dim))
        mass_arr = np.broadcast_to(np.asarray(mass, dtype=float), (n,))
        density_arr = np.broadcast_to(np.asarray(density, dtype=float), (n,))
        if np.any(mass_arr <= 0) or np.any(density_arr <= 0):
            raise ParticleLifecycleError("Particles need positive mass and density")

        rows = {
            'position': positions,
            'velocity': np.broadcast_to(np.asarray(velocity, dtype=float), (n, self.dim)),
            'advection_velocity': np.broadcast_to(np.asarray(velocity, dtype=float), (n, self.dim)),
            'acceleration': np.zeros((n, self.dim)),
            'density': density_arr,
            'pressure': np.broadcast_to(np.asarray(pressure, dtype=float), (n,)),
            'mass': mass_arr,
            'density_rate': np.zeros(n),
            'birth_time': np.full(n, time),
            'label': np.broadcast_to(np.asarray(label, dtype=np.int64), (n,)),
            'ids': np.arange(self._next_id, self._next_id + n, dtype=np.int64),
            'alive': np.ones(n, dtype=bool),
            'near_boundary': np.zeros(n, dtype=bool),
        }
        start = len(self)
        self._append_rows(rows)
        self._next_id += n
        self.initial_count += n
        return np.arange(start, start + n)

    def spawn_duplicates(self, indices: IndexLike, time: Optional[float] = None) -> np.ndarray:
        """
        Append Fluid copies of live Buffer particles.

        Args:
            indices: Buffer particle slots to copy
            time: Birth time stamped on the copies (defaults to the source's)

        Returns:
            Slots of the new particles
        """
        idx = np.atleast_1d(np.asarray(indices, dtype=np.int64))
        if idx.size == 0:
            return idx
        if not np.all(self.alive[idx]):
            raise ParticleLifecycleError(f"Cannot duplicate dead particles {idx[~self.alive[idx]].tolist()}")
        if not np.all(self.label[idx] >= 1):
            raise ParticleLifecycleError("Only buffer particles can be duplicated")

        rows = {name: getattr(self, name)[idx].copy() for name in self.VECTOR_FIELDS + self.SCALAR_FIELDS}
        if time is not None:
            rows['birth_time'] = np.full(idx.size, time)
        rows['label'] = np.full(idx.size, FLUID, dtype=np.int64)
        rows['ids'] = np.arange(self._next_id, self._next_id + idx.size, dtype=np.int64)
        rows['alive'] = np.ones(idx.size, dtype=bool)
        rows['near_boundary'] = self.near_boundary[idx].copy()

        start = len(self)
        self._append_rows(rows)
        self._next_id += idx.size
        self.generated += idx.size
        return np.arange(start, start + idx.size)

    def spawn_duplicate(self, i: int, time: Optional[float] = None) -> int:
        return int(self.spawn_duplicates([i], time)[0])

    def delete_particles(self, indices: IndexLike) -> int:
        idx = np.atleast_1d(np.asarray(indices, dtype=np.int64))
        if idx.size == 0:
            return 0
        if np.unique(idx).size != idx.size or not np.all(self.alive[idx]):
            raise ParticleLifecycleError("Particle deleted twice")
        if np.any(self.label[idx] == WALL):
            raise ParticleLifecycleError("Wall particles cannot be deleted")
        self.alive[idx] = False
        self.deleted += idx.size
        return int(idx.size)

    def delete_particle(self, i: int) -> None:
        self.delete_particles([i])

    def relabel(self, indices: IndexLike, new_label: int) -> None:
        idx = np.atleast_1d(np.asarray(indices, dtype=np.int64))
        if idx.size == 0:
            return
        if new_label == WALL:
            raise ParticleLifecycleError("Particles cannot become walls")
        if not np.all(self.alive[idx]):
            raise ParticleLifecycleError("Cannot relabel dead particles")
        if np.any(self.label[idx] == WALL):
            raise ParticleLifecycleError("Wall particles cannot be relabeled")
        self.label[idx] = new_label

    def compact(self) -> int:
        """Drop dead slots, keeping survivor order; returns the number removed"""
        keep = self.alive
        removed = int(len(keep) - np.count_nonzero(keep))
        if removed == 0:
            return 0
        for name in self._all_fields():
            setattr(self, name, getattr(self, name)[keep])
        return removed

    def check_ledger(self) -> None:
        """Live count must equal initial + generated - deleted"""
        expected = self.initial_count + self.generated - self.deleted
        if self.n_alive != expected:
            raise ParticleLifecycleError(
                f"Particle ledger mismatch: {self.n_alive} live, expected {expected}"
            )

    def total_mass(self) -> float:
        return float(np.sum(self.mass[self.alive]))

    def members(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.alive & (self.label == label))

    def fluid_mask(self) -> np.ndarray:
        """Fluid and buffer particles"""
        return self.alive & (self.label != WALL)

    def wall_mask(self) -> np.ndarray:
        return self.alive & (self.label == WALL)

    def label_counts(self) -> Dict[str, int]:
        labels, counts = np.unique(self.label[self.alive], return_counts=True)
        return {label_name(int(l)): int(c) for l, c in zip(labels, counts)}

    def _all_fields(self):
        return self.VECTOR_FIELDS + self.SCALAR_FIELDS + ('label', 'ids', 'alive', 'near_boundary')

    def _append_rows(self, rows: Dict[str, np.ndarray]) -> None:
        for name in self._all_fields():
            setattr(self, name, np.concatenate([getattr(self, name), rows[name]]))
