"""
Unit tests for local in-/outlet coordinate frames.
"""

import math
import os
import sys
import unittest
from dataclasses import FrozenInstanceError

import numpy as np

# Add the parent directory to the path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from solver.frames import (
    make_frame_2d,
    make_frame_3d,
    rotate_vector_to_global,
    to_global_recycled,
    to_local,
)


class TestFrame2D(unittest.TestCase):
    """Test 2-D angle frames."""

    def test_axis_follows_angle(self):
        """Test the local +X' axis points along (cos, sin)."""
        frame = make_frame_2d([1.0, 2.0], math.pi / 3)
        np.testing.assert_allclose(frame.axis_unit_global, [0.5, math.sqrt(3) / 2], atol=1e-15)
        self.assertAlmostEqual(frame.rotation, math.pi / 3)

    def test_clockwise_sign(self):
        """Test sign -1 turns the axis clockwise."""
        frame = make_frame_2d([0.0, 0.0], math.pi / 2, sign=-1)
        np.testing.assert_allclose(frame.axis_unit_global, [0.0, -1.0], atol=1e-15)
        with self.assertRaises(ValueError):
            make_frame_2d([0.0, 0.0], 0.1, sign=2)

    def test_point_along_axis(self):
        """Test origin + axis maps to (1, 0)."""
        frame = make_frame_2d([1.0, 2.0], math.pi / 2)
        local = to_local(frame, frame.origin_global + frame.axis_unit_global)
        np.testing.assert_allclose(local, [1.0, 0.0], atol=1e-15)

    def test_round_trip(self):
        """Test to_global inverts to_local for many points."""
        rng = np.random.default_rng(3)
        frame = make_frame_2d([0.3, -0.7], -0.9)
        points = rng.uniform(-1.0, 1.0, size=(50, 2))
        np.testing.assert_allclose(frame.to_global(frame.to_local(points)), points, atol=1e-14)

    def test_vector_rotation(self):
        """Test local vectors are rotated without translation."""
        frame = make_frame_2d([5.0, 5.0], math.pi / 2)
        np.testing.assert_allclose(rotate_vector_to_global(frame, [2.0, 0.0]), [0.0, 2.0], atol=1e-15)

    def test_vector_to_local(self):
        """Test the axis maps to (1, 0) and vectors ignore the origin."""
        frame = make_frame_2d([5.0, -3.0], 2.2)
        np.testing.assert_allclose(frame.vector_to_local(frame.axis_unit_global), [1.0, 0.0], atol=1e-15)
        normal = np.array([-frame.axis_unit_global[1], frame.axis_unit_global[0]])
        np.testing.assert_allclose(frame.vector_to_local(3.0 * normal), [0.0, 3.0], atol=1e-14)

    def test_recycle_shift(self):
        """Test a crossing point moves back by the shift along X'."""
        frame = make_frame_2d([0.0, 0.0], 0.0)
        np.testing.assert_allclose(to_global_recycled(frame, [0.3, 0.1], [0.5, 0.0]), [-0.2, 0.1])

    def test_rotated_about_center(self):
        """Test turning a frame a quarter turn about the origin."""
        frame = make_frame_2d([1.0, 0.0], 0.0)
        turned = frame.rotated_2d(math.pi / 2, [0.0, 0.0])
        np.testing.assert_allclose(turned.origin_global, [0.0, 1.0], atol=1e-15)
        np.testing.assert_allclose(turned.axis_unit_global, [0.0, 1.0], atol=1e-15)
        self.assertAlmostEqual(turned.theta, math.pi / 2)

    def test_immutable(self):
        """Test frames cannot be modified after creation."""
        frame = make_frame_2d([0.0, 0.0], 0.2)
        with self.assertRaises(FrozenInstanceError):
            frame.theta = 0.5
        with self.assertRaises(ValueError):
            frame.matrix[0, 0] = 2.0


class TestFrame3D(unittest.TestCase):
    """Test 3-D axis frames."""

    def assert_rotation(self, matrix):
        np.testing.assert_allclose(matrix @ matrix.T, np.identity(3), atol=1e-14)
        self.assertAlmostEqual(np.linalg.det(matrix), 1.0, places=12)

    def test_diagonal_axis(self):
        """Test a frame along (1, -1, 0) / sqrt(2)."""
        target = np.array([1.0, -1.0, 0.0]) / math.sqrt(2.0)
        frame = make_frame_3d([0.1, 0.2, 0.3], target)
        self.assert_rotation(frame.matrix)
        np.testing.assert_allclose(frame.axis_unit_global, target, atol=1e-14)
        np.testing.assert_allclose(frame.to_local(frame.origin_global + target), [1.0, 0.0, 0.0], atol=1e-14)

    def test_unnormalized_axis(self):
        """Test the target axis is normalized."""
        frame = make_frame_3d([0.0, 0.0, 0.0], [0.0, 0.0, 4.0])
        np.testing.assert_allclose(frame.axis_unit_global, [0.0, 0.0, 1.0], atol=1e-14)
        self.assert_rotation(frame.matrix)

    def test_parallel_axis_is_identity(self):
        """Test +X gives the identity."""
        frame = make_frame_3d([0.0, 0.0, 0.0], [2.0, 0.0, 0.0])
        np.testing.assert_array_equal(frame.matrix, np.identity(3))

    def test_antiparallel_axis(self):
        """Test -X gives a half turn about +Z."""
        frame = make_frame_3d([0.0, 0.0, 0.0], [-1.0, 0.0, 0.0])
        np.testing.assert_array_equal(frame.matrix, np.diag([-1.0, -1.0, 1.0]))
        np.testing.assert_array_equal(frame.axis_unit_global, [-1.0, 0.0, 0.0])
        self.assert_rotation(frame.matrix)

    def test_zero_axis_rejected(self):
        """Test a zero axis raises ValueError."""
        with self.assertRaises(ValueError):
            make_frame_3d([0.0, 0.0, 0.0], [0.0, 0.0, 0.0])

    def test_round_trip(self):
        """Test to_global inverts to_local."""
        rng = np.random.default_rng(11)
        frame = make_frame_3d([1.0, -2.0, 0.5], [0.3, 0.4, -0.2])
        points = rng.normal(size=(40, 3))
        np.testing.assert_allclose(frame.to_global(frame.to_local(points)), points, atol=1e-13)

    def test_vector_round_trip(self):
        """Test vector_to_global inverts vector_to_local and keeps lengths."""
        rng = np.random.default_rng(5)
        frame = make_frame_3d([4.0, 4.0, 4.0], [-0.2, 0.9, 0.4])
        vectors = rng.normal(size=(30, 3))
        local = frame.vector_to_local(vectors)
        np.testing.assert_allclose(frame.vector_to_global(local), vectors, atol=1e-13)
        np.testing.assert_allclose(np.linalg.norm(local, axis=1), np.linalg.norm(vectors, axis=1), rtol=1e-13)
        np.testing.assert_allclose(local[:, 0], vectors @ frame.axis_unit_global, atol=1e-13)

    def test_rotation_is_matrix(self):
        """Test 3-D frames report their matrix as rotation."""
        frame = make_frame_3d([0.0, 0.0, 0.0], [0.0, 1.0, 0.0])
        np.testing.assert_array_equal(frame.rotation, frame.matrix)
        with self.assertRaises(ValueError):
            frame.rotated_2d(0.1, [0.0, 0.0])


if __name__ == '__main__':
    unittest.main()
