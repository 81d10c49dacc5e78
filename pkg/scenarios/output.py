"""
Snapshot and probe CSV files
"""

import logging
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from solver.particles import ParticleStore

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def snapshot_columns(dim: int) -> List[str]:
    axes = 'xyz'[:dim]
    return ['t', 'id', 'label'] + list(axes) + [f'v{a}' for a in axes] + ['rho', 'p']


@dataclass
class Snapshot:
    """Per-particle rows of one snapshot file"""

    time: Optional[float]
    ids: np.ndarray
    labels: np.ndarray
    position: np.ndarray
    velocity: np.ndarray
    density: np.ndarray
    pressure: np.ndarray

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int:
        return self.position.shape[1]


def write_snapshot(store: ParticleStore, t: float, path: PathLike, precision: int = 17) -> Path:
    """
    Write all live particles to one CSV file

    Args:
        store: Particle store
        t: Simulation time written in the first column
        path: Output file; parent directories are created
        precision: Significant digits, 17 round-trips doubles exactly

    Returns:
        Path of the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    live = np.flatnonzero(store.alive)
    n = live.size
    table = np.column_stack([
        np.full(n, t),
        store.ids[live],
        store.label[live],
        store.position[live],
        store.velocity[live],
        store.density[live],
        store.pressure[live],
    ]) if n else np.zeros((0, 2 * store.dim + 5))
    header = ','.join(snapshot_columns(store.dim))
    np.savetxt(path, table, delimiter=',', header=header, comments='', fmt=f'%.{precision}g')
    logger.debug(f"💾 Snapshot t={t:.6g} with {n} particles written to {path}")
    return path


def read_snapshot(path: PathLike) -> Snapshot:
    """Read a snapshot file written by write_snapshot"""
    path = Path(path)
    with open(path, 'r') as f:
        header = f.readline().strip().split(',')
    dim = (len(header) - 5) // 2
    if header != snapshot_columns(dim):
        raise ValueError(f"{path} is not a snapshot file (header {header})")

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', UserWarning)
        table = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    if table.size == 0:
        table = np.zeros((0, len(header)))

    return Snapshot(
        time=float(table[0, 0]) if len(table) else None,
        ids=table[:, 1].astype(np.int64),
        labels=table[:, 2].astype(np.int64),
        position=table[:, 3:3 + dim],
        velocity=table[:, 3 + dim:3 + 2 * dim],
        density=table[:, 3 + 2 * dim],
        pressure=table[:, 4 + 2 * dim],
    )


def write_profile_csv(
    path: PathLike, coordinate: np.ndarray, numeric: np.ndarray, analytic: Optional[np.ndarray] = None,
    radial: bool = False,
) -> Path:
    """Probe profile with columns y_local (or r_local), v_analytic, v_numeric"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    coordinate = np.asarray(coordinate, dtype=float)
    if analytic is None:
        analytic = np.full(coordinate.shape, np.nan)
    table = np.column_stack([coordinate, analytic, np.asarray(numeric, dtype=float)])
    header = f"{'r_local' if radial else 'y_local'},v_analytic,v_numeric"
    np.savetxt(path, table, delimiter=',', header=header, comments='', fmt='%.17g')
    return path
