"""
Cell-linked-list neighbor search

Particles are binned into a uniform grid of cell size 2h. Each rebuild
sorts live particles by linear cell id, so the members of a cell are one
contiguous slice of ``sorted_particles``.
"""

import itertools
import logging
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .frames import FrameTransform
from .particles import ParticleStore

logger = logging.getLogger(__name__)


def expand_ranges(starts: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Concatenate the integer ranges [start, start + count)"""
    total = int(np.sum(counts))
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    shifts = np.repeat(starts - np.cumsum(counts) + counts, counts)
    return shifts + np.arange(total, dtype=np.int64)


@dataclass
class NeighborPairs:
    """Directed pairs (i, j) with i != j and |r_i - r_j| < cutoff, sorted by i"""

    i: np.ndarray
    j: np.ndarray
    dx: np.ndarray
    r: np.ndarray

    def __len__(self) -> int:
        return len(self.i)

    @property
    def e(self) -> np.ndarray:
        """Unit vectors e_ij = (r_i - r_j) / r"""
        return self.dx / self.r[:, None]

    def subset(self, mask: np.ndarray) -> "NeighborPairs":
        return NeighborPairs(self.i[mask], self.j[mask], self.dx[mask], self.r[mask])

    def sum_by_i(
        self, values: np.ndarray, n_slots: int, executor: Optional[Executor] = None, workers: int = 1
    ) -> np.ndarray:
        """
        Scatter-add pair values onto their first index.

        With an executor the pair list is split at particle boundaries so
        each worker writes a disjoint slot range.
        """
        values = np.asarray(values, dtype=float)
        trailing = values.shape[1:]
        if executor is None or workers <= 1 or len(self.i) < 2 * workers:
            return _bincount_rows(self.i, values, 0, n_slots, trailing)

        out = np.zeros((n_slots,) + trailing)
        bounds = np.linspace(0, n_slots, workers + 1).astype(np.int64)
        cuts = np.searchsorted(self.i, bounds)

        def work(k: int) -> None:
            lo, hi = cuts[k], cuts[k + 1]
            out[bounds[k]:bounds[k + 1]] = _bincount_rows(
                self.i[lo:hi] - bounds[k], values[lo:hi], 0, bounds[k + 1] - bounds[k], trailing
            )

        list(executor.map(work, range(workers)))
        return out


def _bincount_rows(index, values, offset, n, trailing):
    if not trailing:
        return np.bincount(index - offset, weights=values, minlength=n)[:n].astype(float)
    out = np.empty((n,) + trailing)
    for c in range(trailing[0]):
        out[:, c] = np.bincount(index - offset, weights=values[:, c], minlength=n)[:n]
    return out


class CellGrid:
    """
    Uniform cell-linked list over a fixed axis-aligned domain.

    Particles outside the domain are clamped into the boundary cells and
    counted in ``out_of_bounds``.
    """

    def __init__(self, lower: Sequence[float], upper: Sequence[float], cell_size: float):
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        self.dim = len(self.lower)
        if cell_size <= 0 or np.any(self.upper <= self.lower):
            raise ValueError("Grid needs positive cell size and non-empty bounds")
        self.cell_size = float(cell_size)
        self.shape = np.maximum(np.ceil((self.upper - self.lower) / cell_size).astype(np.int64), 1)
        self.n_cells = int(np.prod(self.shape))
        self.stencil = np.array(list(itertools.product((-1, 0, 1), repeat=self.dim)), dtype=np.int64)

        self.sorted_particles = np.zeros(0, dtype=np.int64)
        self.cell_start = np.zeros(self.n_cells, dtype=np.int64)
        self.cell_end = np.zeros(self.n_cells, dtype=np.int64)
        self.particle_cell = np.zeros(0, dtype=np.int64)
        self.out_of_bounds = 0
        self.rebuilds = 0

    def cell_coords(self, positions: np.ndarray) -> np.ndarray:
        coords = np.floor((np.atleast_2d(positions) - self.lower) / self.cell_size).astype(np.int64)
        return np.clip(coords, 0, self.shape - 1)

    def linear_ids(self, coords: np.ndarray) -> np.ndarray:
        return np.ravel_multi_index(tuple(coords.T), tuple(self.shape))

    def outside(self, positions: np.ndarray) -> np.ndarray:
        positions = np.atleast_2d(positions)
        return np.any((positions < self.lower) | (positions >= self.upper), axis=1)

    def rebuild(self, store: ParticleStore) -> None:
        """Bin all live particles"""
        live = np.flatnonzero(store.alive)
        positions = store.position[live]
        clamped = int(np.count_nonzero(self.outside(positions)))
        if clamped:
            self.out_of_bounds += clamped
            logger.warning(f"⚠️ {clamped} particles outside grid bounds clamped to boundary cells")

        cells = self.linear_ids(self.cell_coords(positions)) if live.size else np.zeros(0, dtype=np.int64)
        order = np.argsort(cells, kind='stable')
        self.sorted_particles = live[order]
        sorted_cells = cells[order]
        all_cells = np.arange(self.n_cells)
        self.cell_start = np.searchsorted(sorted_cells, all_cells, side='left')
        self.cell_end = np.searchsorted(sorted_cells, all_cells, side='right')

        self.particle_cell = np.full(len(store), -1, dtype=np.int64)
        self.particle_cell[live] = cells
        self.rebuilds += 1

    def cell_members(self, cell: int) -> np.ndarray:
        return self.sorted_particles[self.cell_start[cell]:self.cell_end[cell]]

    def neighbors_of(self, i: int) -> Iterator[int]:
        """Candidates from the 3^dim cells around particle i (superset of true neighbors)"""
        cell = self.particle_cell[i]
        if cell < 0:
            return iter(())
        coords = np.array(np.unravel_index(cell, tuple(self.shape)))
        around = coords + self.stencil
        valid = np.all((around >= 0) & (around < self.shape), axis=1)
        ids = self.linear_ids(around[valid])
        members = self.sorted_particles[expand_ranges(self.cell_start[ids], self.cell_end[ids] - self.cell_start[ids])]
        return (int(j) for j in members if j != i)

    def pairs(self, store: ParticleStore, cutoff: float) -> NeighborPairs:
        """All directed neighbor pairs of live particles within ``cutoff``"""
        live = self.sorted_particles
        if live.size == 0:
            empty = np.zeros(0, dtype=np.int64)
            return NeighborPairs(empty, empty, np.zeros((0, self.dim)), np.zeros(0))
        coords = np.array(np.unravel_index(self.particle_cell[live], tuple(self.shape))).T

        i_parts, j_parts = [], []
        for offset in self.stencil:
            around = coords + offset
            valid = np.all((around >= 0) & (around < self.shape), axis=1)
            owners = live[valid]
            ids = self.linear_ids(around[valid])
            counts = self.cell_end[ids] - self.cell_start[ids]
            i_parts.append(np.repeat(owners, counts))
            j_parts.append(self.sorted_particles[expand_ranges(self.cell_start[ids], counts)])

        i = np.concatenate(i_parts)
        j = np.concatenate(j_parts)
        distinct = i != j
        i, j = i[distinct], j[distinct]
        dx = store.position[i] - store.position[j]
        r = np.sqrt(np.einsum('ij,ij->i', dx, dx))
        near = r < cutoff
        i, j, dx, r = i[near], j[near], dx[near], r[near]
        order = np.lexsort((j, i))
        return NeighborPairs(i[order], j[order], dx[order], r[order])


@dataclass
class LocalCellSet:
    """Cells covering one buffer box plus a one-cell margin"""

    buffer_id: int
    cells: np.ndarray

    @classmethod
    def from_box(
        cls, grid: CellGrid, buffer_id: int, frame: FrameTransform, extents: Sequence[float]
    ) -> "LocalCellSet":
        """Cells of the global bounding box of the rotated box, inflated by one cell"""
        half = np.asarray(extents, dtype=float) / 2.0
        corners_local = np.array(list(itertools.product(*[(-h, h) for h in half])))
        corners = frame.to_global(corners_local)
        low = np.floor((corners.min(axis=0) - grid.lower) / grid.cell_size).astype(np.int64) - 1
        high = np.floor((corners.max(axis=0) - grid.lower) / grid.cell_size).astype(np.int64) + 1
        low = np.clip(low, 0, grid.shape - 1)
        high = np.clip(high, 0, grid.shape - 1)
        axes = [np.arange(lo, hi + 1) for lo, hi in zip(low, high)]
        coords = np.array(list(itertools.product(*axes)), dtype=np.int64)
        return cls(buffer_id=buffer_id, cells=np.sort(grid.linear_ids(coords)))

    def __len__(self) -> int:
        return len(self.cells)


def local_candidates(grid: CellGrid, lcs: LocalCellSet) -> np.ndarray:
    """Live particles binned in the buffer's local cells, ascending"""
    starts = grid.cell_start[lcs.cells]
    counts = grid.cell_end[lcs.cells] - starts
    return np.sort(grid.sorted_particles[expand_ranges(starts, counts)])
