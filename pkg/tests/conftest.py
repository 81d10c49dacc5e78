"""
Pytest configuration and fixtures for the SPH solver tests.
"""

import pytest
import logging
import os
import sys

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from solver.kernel import SmoothingKernel
from solver.particles import FLUID, FluidProperties, ParticleStore
from tests import TEST_DP, TEST_RHO0, TEST_U_MAX, lattice_points, make_channel_scenario

logger = logging.getLogger(__name__)


@pytest.fixture(scope="session")
def fluid_props():
    """Water-like fluid with c0 = 10 u_max"""
    return FluidProperties.from_max_velocity(rho0=TEST_RHO0, u_max=TEST_U_MAX, eta=1.0e-3)


@pytest.fixture(scope="session")
def kernel_2d():
    return SmoothingKernel.from_spacing(TEST_DP, dim=2)


@pytest.fixture
def lattice_store(fluid_props):
    """10 x 10 resting fluid lattice at the reference density"""
    store = ParticleStore(dim=2)
    store.add_particles(lattice_points(10, 10, TEST_DP), FLUID, fluid_props.rho0 * TEST_DP ** 2, fluid_props.rho0)
    return store


@pytest.fixture
def channel_scenario():
    """Scenario mapping for the short test channel"""
    return make_channel_scenario()


@pytest.fixture(autouse=True)
def setup_test_environment():
    """Keep SPH_* environment overrides from leaking between tests"""
    original_env = os.environ.copy()

    for key in list(os.environ):
        if key.startswith('SPH_'):
            del os.environ[key]

    yield

    # Restore original environment
    os.environ.clear()
    os.environ.update(original_env)
