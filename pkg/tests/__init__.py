"""
Test package for the SPH open-boundary solver.

This package contains unit tests, short end-to-end runs and test helpers
for the solver, boundary conditions, scenarios and validation harness.
"""

import copy
import os
import sys

import numpy as np

# Add the parent directory to the path so we can import the main modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

# Test configuration constants
TEST_DP = 1.0e-4
TEST_RHO0 = 1000.0
TEST_U_MAX = 0.01

# Straight 2-D channel, 12 particles across and 12 along, with a velocity
# inlet and a zero-pressure outlet; small enough for a few steps in a test
CHANNEL_SCENARIO = {
    'name': 'test_channel',
    'description': 'Short straight test channel',
    'dim': 2,
    'dp': TEST_DP,
    'fluid': {'rho0': TEST_RHO0, 'u_max': TEST_U_MAX, 'eta': 1.0e-3},
    'geometry': {
        'segments': [
            {
                'name': 'channel',
                'start': [0.0, 0.0],
                'direction_deg': 0.0,
                'length': 1.2e-3,
                'width': 1.2e-3,
                'open_start': 'inlet',
                'open_end': 'outlet',
            }
        ],
    },
    'buffers': [
        {
            'id': 1,
            'kind': 'inflow',
            'port': 'inlet',
            'layers': 4,
            'bc': {'type': 'velocity', 'profile': {'parabolic': {'R': 6.0e-4, 'peak': TEST_U_MAX}}},
        },
        {
            'id': 2,
            'kind': 'outflow',
            'port': 'outlet',
            'layers': 4,
            'bc': {'type': 'pressure', 'p_b': 0.0},
        },
    ],
    'end_time': 0.02,
    'output': {
        'snapshot_every': 0.01,
        'probes': [{'name': 'mid', 'segment': 'channel', 's': 6.0e-4}],
    },
}


def make_channel_scenario(**overrides):
    """Deep copy of the test channel with top-level keys replaced."""
    data = copy.deepcopy(CHANNEL_SCENARIO)
    data.update(overrides)
    return data


def lattice_points(nx, ny, dp, origin=(0.0, 0.0)):
    """Cell-centred nx x ny lattice of spacing dp."""
    xs = origin[0] + (np.arange(nx) + 0.5) * dp
    ys = origin[1] + (np.arange(ny) + 0.5) * dp
    grid_x, grid_y = np.meshgrid(xs, ys, indexing='ij')
    return np.column_stack([grid_x.ravel(), grid_y.ravel()])
