"""
Unit tests for buffer boundary conditions, time drivers and the
Windkessel outlet model.
"""

import math
import os
import sys
import unittest

import numpy as np

# Add the parent directory to the path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from boundaries import (
    AORTIC_INFLOW,
    AORTIC_OUTLETS,
    BoundaryCondition,
    BoundaryConditionFactory,
    ConstantDriver,
    CosineDriver,
    ParabolicProfile,
    PlugProfile,
    PoiseuilleProfile,
    PressureBC,
    VelocityBC,
    WindkesselState,
    apply_pressure_bc,
    apply_velocity_bc,
    fourier_inflow,
    make_driver,
    make_profile,
    measure_flow_rate,
    poiseuille_inlet_profile,
    windkessel_advance,
)
from boundaries.windkessel import compliance_to_si, resistance_to_si
from solver.buffers import BufferKind, BufferZone, identify_inflow_members
from solver.exceptions import ConfigurationError
from solver.frames import make_frame_2d, make_frame_3d
from solver.particles import FLUID, FluidProperties, ParticleStore
from tests import lattice_points
from validation.analytic import windkessel_reference

DP = 1.0e-3


def make_buffer_store(kind=BufferKind.INFLOW, theta=0.0, velocity=(0.0, 0.0)):
    """4 x 10 members filling a buffer of depth 4 dp and width 10 dp at the origin"""
    frame = make_frame_2d([0.0, 0.0], theta)
    buffer = BufferZone(id=1, kind=kind, frame=frame, extents=(4 * DP, 10 * DP))
    store = ParticleStore(2)
    local = lattice_points(4, 10, DP, origin=(-2 * DP, -5 * DP))
    store.add_particles(frame.to_global(local), FLUID, 1000.0 * DP ** 2, 1000.0, velocity=np.asarray(velocity))
    identify_inflow_members(buffer, store)
    return buffer, store


class TestTimeDrivers(unittest.TestCase):
    """Test scalar time drivers."""

    def test_constant(self):
        self.assertEqual(make_driver(3)(10.0), 3.0)
        self.assertEqual(make_driver({'constant': 2.5})(0.0), 2.5)
        self.assertIsInstance(make_driver(0.0), ConstantDriver)

    def test_cosine(self):
        """Test offset + amplitude cos(omega t + phase)."""
        driver = make_driver({'cosine': {'amplitude': 0.1, 'omega': 2.0, 'offset': 1.0}})
        self.assertIsInstance(driver, CosineDriver)
        self.assertAlmostEqual(driver(0.0), 1.1)
        self.assertAlmostEqual(driver(math.pi / 2.0), 0.9)

    def test_fourier_periodic(self):
        """Test the aortic inflow series repeats every period."""
        t = np.linspace(0.0, 1.0, 17)
        np.testing.assert_allclose(fourier_inflow(t), fourier_inflow(t + AORTIC_INFLOW.period), atol=1e-12)
        self.assertAlmostEqual(make_driver({'fourier': {'scale': 2.0}})(0.3), 2.0 * fourier_inflow(0.3))

    def test_fourier_mean(self):
        """Test the cycle average equals a0."""
        t = np.linspace(0.0, AORTIC_INFLOW.period, 400, endpoint=False)
        self.assertAlmostEqual(float(np.mean(fourier_inflow(t))), AORTIC_INFLOW.a0, places=12)

    def test_custom_fourier_table(self):
        driver = make_driver({'fourier': {'table': {'a0': 1.0, 'a': [0.5], 'b': [0.0], 'omega': 1.0}}})
        self.assertAlmostEqual(driver(0.0), 1.5)

    def test_invalid_drivers(self):
        """Test unknown kinds and malformed parameters raise ConfigurationError."""
        with self.assertRaises(ConfigurationError):
            make_driver({'sawtooth': {}})
        with self.assertRaises(ConfigurationError):
            make_driver({'cosine': {'amplitude': 1.0}})
        with self.assertRaises(ConfigurationError):
            make_driver('fast')
        with self.assertRaises(ConfigurationError):
            make_driver({'fourier': {'table': 'venous'}})


class TestVelocityProfiles(unittest.TestCase):
    """Test local-frame velocity profiles."""

    def test_parabolic(self):
        """Test peak at the axis, zero at and beyond the radius."""
        profile = ParabolicProfile(radius=0.5, peak=2.0)
        local = np.array([[0.0, 0.0], [0.0, 0.25], [0.0, -0.5], [0.0, 0.7]])
        np.testing.assert_allclose(profile(local)[:, 0], [2.0, 1.5, 0.0, 0.0])
        np.testing.assert_array_equal(profile(local)[:, 1], 0.0)

    def test_parabolic_3d_uses_radius(self):
        profile = ParabolicProfile(radius=1.0, peak=1.0)
        v = profile(np.array([[0.3, 0.6, 0.0], [0.3, 0.0, 0.6]]))
        np.testing.assert_allclose(v[:, 0], [0.64, 0.64])

    def test_poiseuille_peak(self):
        """Test the centreline speed dP d^2 / (8 eta L)."""
        profile = PoiseuilleProfile(d=1.0e-3, dP=0.1, eta=2.5e-4, L=4.0e-3)
        self.assertAlmostEqual(profile.peak, 0.0125)
        self.assertAlmostEqual(poiseuille_inlet_profile(0.0, 1.0e-3, 0.1, 2.5e-4, 4.0e-3), 0.0125)
        self.assertEqual(poiseuille_inlet_profile(0.6e-3, 1.0e-3, 0.1, 2.5e-4, 4.0e-3), 0.0)

    def test_modulated_plug(self):
        profile = PlugProfile(speed=0.5, modulation=CosineDriver(amplitude=1.0, omega=1.0))
        np.testing.assert_allclose(profile(np.zeros((3, 2)), t=math.pi)[:, 0], [-0.5] * 3)

    def test_make_profile(self):
        """Test profiles built from scenario mappings."""
        profile = make_profile({'poiseuille': {'d': 1.0e-3, 'dP': 0.1, 'L': 4.0e-3}}, {'eta': 2.5e-4})
        self.assertAlmostEqual(profile.peak, 0.0125)
        self.assertIsInstance(make_profile({'plug': {'speed': 2.0}}), PlugProfile)
        self.assertAlmostEqual(make_profile({'plug': {'fourier': {}}}).modulation(0.0), fourier_inflow(0.0))
        with self.assertRaises(ConfigurationError):
            make_profile({'triangle': {}})
        with self.assertRaises(ConfigurationError):
            make_profile({'parabolic': {'R': -1.0}})
        with self.assertRaises(ConfigurationError):
            make_profile({'poiseuille': {'d': 1.0e-3, 'dP': 0.1, 'L': 4.0e-3}})


class TestVelocityBC(unittest.TestCase):
    """Test prescribed-velocity buffers."""

    def test_profile_rotated_into_global_frame(self):
        """Test a buffer facing +Y gets velocities along +Y."""
        buffer, store = make_buffer_store(theta=math.pi / 2.0)
        profile = ParabolicProfile(radius=5 * DP, peak=0.2)
        apply_velocity_bc(buffer, store, profile)

        local = buffer.frame.to_local(store.position)
        expected = 0.2 * (1.0 - (local[:, 1] / (5 * DP)) ** 2)
        np.testing.assert_allclose(store.velocity[:, 0], 0.0, atol=1e-15)
        np.testing.assert_allclose(store.velocity[:, 1], expected, atol=1e-15)
        np.testing.assert_array_equal(store.advection_velocity, store.velocity)

    def test_boundary_pressure_is_own_pressure(self):
        buffer, store = make_buffer_store()
        store.pressure[:] = np.arange(40.0)
        bc = VelocityBC({'type': 'velocity', 'profile': {'plug': {'speed': 1.0}}})
        members = buffer.members(store)
        np.testing.assert_array_equal(bc.boundary_pressure(buffer, store, members, 0.0), np.arange(40.0))
        bc.apply(buffer, store, 0.0)
        np.testing.assert_allclose(store.velocity, [[1.0, 0.0]] * 40)


class TestPressureBC(unittest.TestCase):
    """Test prescribed-pressure buffers."""

    def setUp(self):
        self.props = FluidProperties(rho0=1000.0, c0=0.1, eta=1.0e-3)

    def test_velocity_projected_on_normal(self):
        """Test v = (v . u) u for a buffer facing 45 degrees."""
        buffer, store = make_buffer_store(theta=math.pi / 4.0, velocity=(1.0, 0.0))
        apply_pressure_bc(buffer, store)
        half = 0.5
        np.testing.assert_allclose(store.velocity, [[half, half]] * 40, atol=1e-15)

    def test_constant_and_driven_pressure(self):
        buffer, store = make_buffer_store()
        members = buffer.members(store)
        bc = PressureBC({'type': 'pressure', 'p_b': 0.1})
        np.testing.assert_array_equal(bc.boundary_pressure(buffer, store, members, 5.0), 0.1)
        driven = PressureBC({'type': 'pressure', 'p_b': {'cosine': {'amplitude': 0.1, 'omega': 1.0}}})
        self.assertAlmostEqual(driven.pressure(math.pi), -0.1)

    def test_recycled_particles_take_boundary_density(self):
        """Test recycled members get rho = rho0 + p_b / c0^2."""
        buffer, store = make_buffer_store()
        bc = PressureBC({'type': 'pressure', 'p_b': 0.1})
        bc.on_recycle(store, np.array([0, 1]), 0.0, self.props)
        np.testing.assert_allclose(store.density[:2], 1010.0)
        np.testing.assert_allclose(store.pressure[:2], 0.1)
        self.assertEqual(store.density[2], 1000.0)

    def test_windkessel_pressure_rises_with_outflow(self):
        """Test an outflow buffer feeding a Windkessel raises its pressure."""
        buffer, store = make_buffer_store(kind=BufferKind.OUTFLOW, velocity=(0.1, 0.0))
        bc = PressureBC({'type': 'pressure', 'p_b': {'windkessel': {'Rp': 1.0, 'C': 0.1, 'Rd': 10.0, 'units': 'si'}}})
        self.assertEqual(bc.pressure(0.0), 0.0)
        bc.advance(buffer, store, 0.01, 0.01, DP)
        self.assertGreater(bc.pressure(0.01), 0.0)
        self.assertIn('windkessel', bc.describe())


class TestBoundaryConditionFactory(unittest.TestCase):
    """Test boundary condition creation."""

    def test_create_known_types(self):
        self.assertIsInstance(BoundaryConditionFactory.create_condition({'type': 'pressure', 'p_b': 0.0}), PressureBC)
        velocity = BoundaryConditionFactory.create_condition(
            {'type': 'velocity', 'profile': {'parabolic': {'R': 1.0}}}
        )
        self.assertIsInstance(velocity, VelocityBC)

    def test_unknown_type(self):
        with self.assertRaises(ConfigurationError):
            BoundaryConditionFactory.create_condition({'type': 'slip'})

    def test_invalid_parameters(self):
        with self.assertRaises(ConfigurationError):
            BoundaryConditionFactory.create_condition({'type': 'pressure', 'p_b': {'windkessel': 'pulmonary'}})

    def test_register_condition(self):
        """Test registering a custom condition and rejecting non-conditions."""

        class FrozenBC(BoundaryCondition):
            def boundary_pressure(self, buffer, store, members, t):
                return np.zeros(len(members))

            def apply(self, buffer, store, t):
                store.velocity[buffer.members(store)] = 0.0

        BoundaryConditionFactory.register_condition('frozen', FrozenBC)
        try:
            self.assertIn('frozen', BoundaryConditionFactory.get_available_conditions())
            self.assertIsInstance(BoundaryConditionFactory.create_condition({'type': 'frozen'}), FrozenBC)
        finally:
            BoundaryConditionFactory._conditions.pop('frozen', None)
        with self.assertRaises(ValueError):
            BoundaryConditionFactory.register_condition('bad', dict)


class TestWindkessel(unittest.TestCase):
    """Test the three-element Windkessel outlet."""

    def test_unit_conversion(self):
        """Test CGS presets are converted to SI."""
        state = WindkesselState.from_config('right_common_carotid')
        self.assertAlmostEqual(state.Rp, resistance_to_si(1180.0))
        self.assertAlmostEqual(state.Rp, 1.18e8)
        self.assertAlmostEqual(state.C, compliance_to_si(7.70e-5))
        self.assertEqual(len(AORTIC_OUTLETS), 5)

    def test_invalid_parameters(self):
        with self.assertRaises(ConfigurationError):
            WindkesselState.from_config('unknown_branch')
        with self.assertRaises(ConfigurationError):
            WindkesselState(Rp=1.0, C=0.0, Rd=1.0)
        with self.assertRaises(ConfigurationError):
            WindkesselState.from_config({'Rp': 1.0, 'C': 1.0})
        with self.assertRaises(ValueError):
            windkessel_advance(WindkesselState(Rp=1.0, C=1.0, Rd=1.0), 1.0, 0.0)

    def test_steady_state(self):
        """Test constant flow settles at P = (Rp + Rd) Q."""
        state = WindkesselState(Rp=1.0, C=0.1, Rd=10.0)
        for _ in range(3000):
            windkessel_advance(state, 2.0e-3, 0.01)
        self.assertAlmostEqual(state.P / state.steady_pressure(2.0e-3), 1.0, places=9)

    def test_matches_reference_integration(self):
        """Test backward Euler against a tightly-toleranced reference."""
        Q0 = 1.0e-3

        def flow(t):
            return Q0 * (1.0 + 0.5 * math.sin(2.0 * math.pi * t))

        def flow_derivative(t):
            return Q0 * math.pi * math.cos(2.0 * math.pi * t)

        dt = 1.0e-4
        times = np.arange(0.0, 2.0 + 0.5 * dt, dt)
        reference = windkessel_reference(flow, flow_derivative, WindkesselState(Rp=1.0, C=0.1, Rd=10.0), times)

        state = WindkesselState(Rp=1.0, C=0.1, Rd=10.0, Q=flow(0.0))
        stepped = [state.P]
        for t in times[1:]:
            stepped.append(windkessel_advance(state, flow(t), dt))
        error = np.max(np.abs(np.asarray(stepped) - reference)) / np.max(np.abs(reference))
        self.assertLess(error, 1e-2)

    def test_reference_exponential_approach(self):
        """Test the reference against the closed form for constant flow."""
        state = WindkesselState(Rp=1.0, C=0.1, Rd=10.0)
        times = np.linspace(0.0, 3.0, 31)
        reference = windkessel_reference(lambda t: 1.0, lambda t: 0.0, state, times)
        expected = 11.0 * (1.0 - np.exp(-times / 1.0))
        np.testing.assert_allclose(reference, expected, rtol=1e-6, atol=1e-6)

    def test_flow_rate_measurement(self):
        """Test a uniform slab moving at u carries Q = u b."""
        buffer, store = make_buffer_store(kind=BufferKind.OUTFLOW, theta=0.4)
        store.velocity[:] = 0.2 * buffer.frame.axis_unit_global
        self.assertAlmostEqual(measure_flow_rate(buffer, store, DP), 0.2 * 10 * DP)

    def test_flow_rate_ignores_tangential_velocity(self):
        """Test sliding along the buffer face carries no flux."""
        buffer, store = make_buffer_store(kind=BufferKind.OUTFLOW, theta=-1.1)
        axis = buffer.frame.axis_unit_global
        tangent = np.array([-axis[1], axis[0]])
        store.velocity[:] = 0.2 * axis + 0.7 * tangent
        self.assertAlmostEqual(measure_flow_rate(buffer, store, DP), 0.2 * 10 * DP)
        store.velocity[:] = 0.7 * tangent
        self.assertAlmostEqual(measure_flow_rate(buffer, store, DP), 0.0)

    def test_flow_rate_3d(self):
        """Test Q = u b c in a 3-D buffer."""
        frame = make_frame_3d([0.0, 0.0, 0.0], [0.0, 1.0, 0.0])
        buffer = BufferZone(id=1, kind=BufferKind.OUTFLOW, frame=frame, extents=(4 * DP, 6 * DP, 6 * DP))
        axes = [(np.arange(n) + 0.5) * DP - n * DP / 2.0 for n in (4, 6, 6)]
        local = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing='ij')], axis=1)
        store = ParticleStore(3)
        store.add_particles(frame.to_global(local), FLUID, 1.0, 1000.0, velocity=np.array([0.0, 0.3, 0.0]))
        identify_inflow_members(buffer, store)
        self.assertAlmostEqual(measure_flow_rate(buffer, store, DP) / (0.3 * 36 * DP ** 2), 1.0)


if __name__ == '__main__':
    unittest.main()
