"""
Unit tests for the particle store and its lifecycle operations.
"""

import os
import sys
import unittest

import numpy as np

# Add the parent directory to the path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from solver.exceptions import ParticleLifecycleError
from solver.particles import FLUID, WALL, FluidProperties, ParticleStore, is_buffer_label, label_name
from tests import lattice_points


class TestFluidProperties(unittest.TestCase):
    """Test fluid parameter handling."""

    def test_sound_speed_from_max_velocity(self):
        """Test c0 = 10 u_max and nu = eta / rho0."""
        props = FluidProperties.from_max_velocity(rho0=1000.0, u_max=0.5, eta=2.0)
        self.assertAlmostEqual(props.c0, 5.0)
        self.assertAlmostEqual(props.nu, 2.0e-3)

    def test_invalid_values(self):
        """Test non-physical parameters raise ValueError."""
        with self.assertRaises(ValueError):
            FluidProperties(rho0=0.0, c0=1.0, eta=0.0)
        with self.assertRaises(ValueError):
            FluidProperties(rho0=1.0, c0=1.0, eta=-1.0)


class TestLabels(unittest.TestCase):
    """Test label helpers."""

    def test_label_names(self):
        self.assertEqual(label_name(FLUID), 'Fluid')
        self.assertEqual(label_name(WALL), 'Wall')
        self.assertEqual(label_name(3), 'Buffer(3)')

    def test_buffer_labels(self):
        self.assertTrue(is_buffer_label(1))
        self.assertFalse(is_buffer_label(FLUID))
        self.assertFalse(is_buffer_label(WALL))


class TestParticleStore(unittest.TestCase):
    """Test structural operations on the particle store."""

    def setUp(self):
        """Set up 16 fluid and 4 wall particles."""
        self.store = ParticleStore(dim=2)
        self.store.add_particles(lattice_points(4, 4, 1.0), FLUID, 1.0, 1000.0)
        self.store.add_particles(lattice_points(4, 1, 1.0, origin=(0.0, -1.0)), WALL, 1.0, 1000.0)

    def test_add_particles(self):
        """Test counts, unique ids and initial ledger."""
        self.assertEqual(len(self.store), 20)
        self.assertEqual(self.store.n_alive, 20)
        self.assertEqual(len(np.unique(self.store.ids)), 20)
        self.assertEqual(self.store.initial_count, 20)
        self.assertEqual(self.store.label_counts(), {'Fluid': 16, 'Wall': 4})
        self.assertAlmostEqual(self.store.total_mass(), 20.0)
        self.store.check_ledger()

    def test_add_rejects_nonpositive_mass(self):
        """Test particles need positive mass and density."""
        with self.assertRaises(ParticleLifecycleError):
            self.store.add_particles([[0.0, 0.0]], FLUID, 0.0, 1000.0)

    def test_invalid_dimension(self):
        with self.assertRaises(ValueError):
            ParticleStore(dim=4)

    def test_spawn_duplicates(self):
        """Test buffer particles are copied as fluid with new ids."""
        self.store.relabel([0, 1], 1)
        self.store.velocity[0] = [0.5, 0.0]
        new = self.store.spawn_duplicates([0, 1], time=0.25)

        self.assertEqual(len(new), 2)
        np.testing.assert_array_equal(self.store.label[new], [FLUID, FLUID])
        np.testing.assert_array_equal(self.store.position[new], self.store.position[[0, 1]])
        np.testing.assert_array_equal(self.store.velocity[new[0]], [0.5, 0.0])
        np.testing.assert_array_equal(self.store.birth_time[new], [0.25, 0.25])
        self.assertEqual(len(np.unique(self.store.ids)), 22)
        self.assertEqual(self.store.generated, 2)
        self.store.check_ledger()

    def test_spawn_requires_buffer_label(self):
        """Test fluid and wall particles cannot be duplicated."""
        with self.assertRaises(ParticleLifecycleError):
            self.store.spawn_duplicate(0)
        with self.assertRaises(ParticleLifecycleError):
            self.store.spawn_duplicate(16)

    def test_delete_twice_rejected(self):
        """Test a particle can only be deleted once."""
        self.store.delete_particle(3)
        with self.assertRaises(ParticleLifecycleError):
            self.store.delete_particle(3)
        with self.assertRaises(ParticleLifecycleError):
            self.store.delete_particles([5, 5])

    def test_walls_are_permanent(self):
        """Test walls cannot be deleted, relabeled or created by relabeling."""
        with self.assertRaises(ParticleLifecycleError):
            self.store.delete_particle(16)
        with self.assertRaises(ParticleLifecycleError):
            self.store.relabel([16], 1)
        with self.assertRaises(ParticleLifecycleError):
            self.store.relabel([0], WALL)

    def test_relabel_dead_rejected(self):
        self.store.delete_particle(2)
        with self.assertRaises(ParticleLifecycleError):
            self.store.relabel([2], 1)

    def test_compact_keeps_order(self):
        """Test compaction drops dead slots and keeps survivor order."""
        ids_before = self.store.ids.copy()
        self.store.delete_particles([1, 4])
        removed = self.store.compact()

        self.assertEqual(removed, 2)
        self.assertEqual(len(self.store), 18)
        np.testing.assert_array_equal(self.store.ids, np.delete(ids_before, [1, 4]))
        self.assertTrue(np.all(self.store.alive))
        self.store.check_ledger()
        self.assertEqual(self.store.compact(), 0)

    def test_ledger_detects_corruption(self):
        """Test the ledger check catches untracked removals."""
        self.store.alive[0] = False
        with self.assertRaises(ParticleLifecycleError):
            self.store.check_ledger()

    def test_members_and_masks(self):
        """Test label queries."""
        self.store.relabel([2, 3], 2)
        np.testing.assert_array_equal(self.store.members(2), [2, 3])
        self.assertEqual(int(np.count_nonzero(self.store.fluid_mask())), 16)
        self.assertEqual(int(np.count_nonzero(self.store.wall_mask())), 4)
        self.assertEqual(self.store.label_counts()['Buffer(2)'], 2)


if __name__ == '__main__':
    unittest.main()
