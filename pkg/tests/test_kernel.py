"""
Tests for the kernel module.
"""

import math
import os
import shutil
import unittest
from unittest.mock import patch

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from relbackflow.exceptions import DomainError
from relbackflow.kernel import assemble, kernel, kernel_nonrel, kernel_rel, sinc
from relbackflow.params import EpsilonParams, QuadGrid, build_grid, gamma

momenta = st.floats(min_value=0.0, max_value=20.0)
epsilons = st.floats(min_value=1e-3, max_value=5.0)


class TestSinc(unittest.TestCase):
    """Test cases for sinc."""

    def test_zero(self):
        """Test sinc(0) = 1."""
        self.assertEqual(sinc(0.0), 1.0)

    def test_series_branch_matches_direct_formula(self):
        """Test continuity across the series cutoff."""
        for x in (9.9e-5, 1.01e-4, 1e-6, -5e-5):
            self.assertAlmostEqual(sinc(x), 1.0 - x * x / 6.0, places=15)
        self.assertAlmostEqual(sinc(1.0), math.sin(1.0), places=15)

    def test_array(self):
        """Test vectorized evaluation."""
        values = sinc(np.array([0.0, math.pi, 2.0]))
        np.testing.assert_allclose(values, [1.0, 0.0, math.sin(2.0) / 2.0], atol=1e-15)


class TestKernelFunctions(unittest.TestCase):
    """Test cases for pointwise kernel evaluation."""

    def test_relativistic_diagonal(self):
        """Test K(r, r) = 2r/(pi gamma(r))."""
        eps = EpsilonParams(0.7)
        for r in (0.0, 0.3, 1.0, 4.5):
            expected = 2.0 * r / (math.pi * gamma(r, eps))
            self.assertAlmostEqual(kernel_rel(r, r, eps), expected, places=14)

    def test_relativistic_diagonal_at_one(self):
        """Test K(1, 1) at eps = 1 equals 2/(pi sqrt 2)."""
        value = kernel_rel(1.0, 1.0, EpsilonParams(1.0))
        self.assertAlmostEqual(value, 2.0 / (math.pi * math.sqrt(2.0)), places=14)
        self.assertAlmostEqual(value, 0.450158, places=6)

    def test_small_epsilon_limit(self):
        """Test that the relativistic kernel approaches the non-relativistic one."""
        rel = kernel_rel(1.3, 0.7, EpsilonParams(1e-3))
        nonrel = kernel_nonrel(1.3, 0.7)
        self.assertLess(abs(rel - nonrel), 1e-5)

    def test_nonrelativistic_values(self):
        """Test hand-evaluated points of the non-relativistic kernel."""
        self.assertEqual(kernel_nonrel(0.0, 0.0), 0.0)
        self.assertAlmostEqual(kernel_nonrel(2.0, 2.0), 4.0 / math.pi, places=14)
        self.assertAlmostEqual(kernel_nonrel(2.0, 1.0), math.sin(3.0) / math.pi, places=14)

    def test_dispatch(self):
        """Test that kernel() routes eps = 0 to the non-relativistic form."""
        self.assertEqual(kernel(2.0, 1.0, EpsilonParams(0.0)), kernel_nonrel(2.0, 1.0))
        eps = EpsilonParams(0.5)
        self.assertEqual(kernel(2.0, 1.0, eps), kernel_rel(2.0, 1.0, eps))

    def test_errors(self):
        """Test domain errors for eps = 0 and negative momenta."""
        with self.assertRaises(DomainError):
            kernel_rel(1.0, 1.0, EpsilonParams(0.0))
        with self.assertRaises(DomainError):
            kernel_rel(-1.0, 1.0, EpsilonParams(1.0))
        with self.assertRaises(DomainError):
            kernel_nonrel(1.0, -0.1)

    @given(momenta, momenta, epsilons)
    @settings(max_examples=300, deadline=None)
    def test_symmetry(self, r, s, eps):
        """Test K(r, s) = K(s, r)."""
        params = EpsilonParams(eps)
        self.assertTrue(
            math.isclose(
                kernel_rel(r, s, params), kernel_rel(s, r, params), rel_tol=1e-12, abs_tol=1e-15
            )
        )

    @given(st.floats(min_value=0.01, max_value=10.0), epsilons)
    @settings(max_examples=200, deadline=None)
    def test_continuous_across_diagonal(self, r, eps):
        """Test that off-diagonal values approach the diagonal."""
        params = EpsilonParams(eps)
        diagonal = kernel_rel(r, r, params)
        for delta in (1e-6, -1e-6):
            self.assertLess(abs(kernel_rel(r, r + delta, params) - diagonal), 1e-5)


    @given(momenta, momenta, epsilons)
    @settings(max_examples=300, deadline=None)
    def test_bounded_by_momentum_sum(self, r, s, eps):
        """Test |K(r, s)| <= (r + s)/pi."""
        value = kernel_rel(r, s, EpsilonParams(eps))
        self.assertLessEqual(abs(value), (r + s) / math.pi * (1.0 + 1e-12) + 1e-300)

    @given(st.floats(min_value=1e-4, max_value=1e-3))
    @settings(max_examples=50, deadline=None)
    def test_quadratic_approach_to_nonrelativistic(self, eps):
        """Test max |K_rel - K_nonrel| <= C eps^2 over r, s in [0, 5]."""
        r = np.linspace(0.0, 5.0, 26)[:, None]
        s = np.linspace(0.0, 5.0, 26)[None, :]
        difference = np.max(np.abs(kernel_rel(r, s, EpsilonParams(eps)) - kernel_nonrel(r, s)))
        self.assertLessEqual(difference, 2000.0 * eps ** 2)

    def test_limit_error_scales_as_eps_squared(self):
        """Test that halving eps quarters the deviation from the eps = 0 kernel."""
        r = np.linspace(0.0, 5.0, 26)[:, None]
        s = np.linspace(0.0, 5.0, 26)[None, :]
        nonrel = kernel_nonrel(r, s)
        deviations = [
            np.max(np.abs(kernel_rel(r, s, EpsilonParams(eps)) - nonrel)) for eps in (1e-3, 5e-4)
        ]
        self.assertGreater(deviations[0], 0.0)
        self.assertAlmostEqual(deviations[0] / deviations[1], 4.0, delta=0.2)


class TestAssemble(unittest.TestCase):
    """Test cases for Nystrom assembly."""

    def setUp(self):
        """Set up test fixtures."""
        self.test_dir = os.path.join(os.path.dirname(__file__), "test_data", "kernel")
        os.makedirs(self.test_dir, exist_ok=True)

    def tearDown(self):
        """Clean up test fixtures."""
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def test_entries_match_weighted_kernel(self):
        """Test M_ij = sqrt(w_i) K(r_i, r_j) sqrt(w_j)."""
        eps = EpsilonParams(1.0)
        grid = build_grid(6.0, 30, 1)
        matrix = assemble(eps, grid)
        i, j = 7, 19
        expected = (
            math.sqrt(grid.weights[i]) * kernel_rel(grid.nodes[i], grid.nodes[j], eps)
            * math.sqrt(grid.weights[j])
        )
        self.assertAlmostEqual(matrix.entries[i, j], expected, places=14)
        self.assertEqual(matrix.size, 30)
        self.assertTrue(matrix.symmetrized)

    def test_exactly_symmetric_and_read_only(self):
        """Test exact symmetry across block boundaries."""
        matrix = assemble(EpsilonParams(0.4), build_grid(6.0, 300, 1))
        np.testing.assert_array_equal(matrix.entries, matrix.entries.T)
        with self.assertRaises(ValueError):
            matrix.entries[0, 0] = 1.0

    def test_nonrelativistic_assembly(self):
        """Test that eps = 0 assembles the non-relativistic kernel."""
        grid = build_grid(4.0, 20, 1)
        matrix = assemble(EpsilonParams(0.0), grid)
        expected = grid.weights[3] * kernel_nonrel(grid.nodes[3], grid.nodes[3])
        self.assertAlmostEqual(matrix.entries[3, 3], expected, places=14)

    def test_single_node_at_origin(self):
        """Test the degenerate one-node grid at r = 0."""
        grid = QuadGrid(q0=1.0, n0=1, h=1, nodes=np.array([0.0]), weights=np.array([1.0]))
        matrix = assemble(EpsilonParams(1.0), grid)
        np.testing.assert_array_equal(matrix.entries, [[0.0]])

    def test_to_csv(self):
        """Test that the matrix dump reloads in full precision."""
        matrix = assemble(EpsilonParams(1.0), build_grid(6.0, 12, 1))
        path = os.path.join(self.test_dir, "matrix.csv")
        self.assertTrue(matrix.to_csv(path))
        reloaded = np.loadtxt(path, delimiter=",")
        np.testing.assert_array_equal(reloaded, matrix.entries)

    @patch("relbackflow.kernel.ensure_directory", return_value=False)
    def test_to_csv_directory_failure(self, mock_ensure):
        """Test that the dump reports False when its directory cannot be created."""
        matrix = assemble(EpsilonParams(1.0), build_grid(6.0, 12, 1))
        path = os.path.join(self.test_dir, "nested", "matrix.csv")
        self.assertFalse(matrix.to_csv(path))
        self.assertFalse(os.path.exists(path))
        mock_ensure.assert_called_once()


if __name__ == "__main__":
    unittest.main()
