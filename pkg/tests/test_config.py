"""
Tests for the config module.
"""

import json
import os
import shutil
import unittest
from unittest.mock import patch

from relbackflow.config import RunConfig, SolverConfig
from relbackflow.exceptions import DomainError


class TestSolverConfig(unittest.TestCase):
    """Test cases for SolverConfig."""

    def test_defaults(self):
        """Test the documented defaults."""
        self.assertEqual(
            SolverConfig().solver_kwargs(),
            {
                "q0": 6.0,
                "n0": 200,
                "eig_tol": 1e-8,
                "refine_tol": 5e-5,
                "h_max": 16,
                "max_iter": 200000,
                "method": "power",
            },
        )

    def test_frozen(self):
        """Test that solver settings are immutable."""
        with self.assertRaises(AttributeError):
            SolverConfig().n0 = 10


class TestRunConfig(unittest.TestCase):
    """Test cases for RunConfig."""

    def setUp(self):
        """Set up test fixtures."""
        self.test_dir = os.path.join(os.path.dirname(__file__), "test_data", "config")
        os.makedirs(self.test_dir, exist_ok=True)

    def tearDown(self):
        """Clean up test fixtures."""
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def test_defaults(self):
        """Test a few command defaults."""
        config = RunConfig()
        self.assertIsNone(config.epsilon)
        self.assertEqual(len(config.epsilons), 25)
        self.assertEqual(config.epsilons[0], 0.1)
        self.assertEqual(config.epsilons[-1], 2.5)
        self.assertEqual(config.families, ["airy", "bessel"])
        self.assertEqual(config.restarts, 200)
        self.assertTrue(config.weighted)

    def test_save_load_round_trip(self):
        """Test that a saved config loads back unchanged."""
        path = os.path.join(self.test_dir, "run.json")
        config = RunConfig(epsilon=0.9, family="airy", params=[-1.0, 0.5, 1.0, 0.2, 0.4, 0.7])
        config.save(path)
        self.assertEqual(RunConfig.load(path), config)

    def test_unknown_keys(self):
        """Test DomainError for keys that are not configuration fields."""
        with self.assertRaises(DomainError):
            RunConfig.from_dict({"epsilon": 1.0, "temperature": 3})
        path = os.path.join(self.test_dir, "bad.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump({"epsilonn": 1.0}, f)
        with self.assertRaises(DomainError):
            RunConfig.load(path)

    def test_non_object_file(self):
        """Test DomainError for a JSON file that is not an object."""
        path = os.path.join(self.test_dir, "list.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump([1, 2], f)
        with self.assertRaises(DomainError):
            RunConfig.load(path)

    def test_non_numeric_values(self):
        """Test DomainError for strings, booleans and floats in numeric fields."""
        for data in (
            {"q0": "abc"},
            {"n0": "200"},
            {"n0": 200.5},
            {"h_max": True},
            {"epsilon": [1.0]},
            {"epsilons": [0.5, "x"]},
            {"tau_range": "0,1"},
        ):
            with self.assertRaises(DomainError, msg=str(data)):
                RunConfig.from_dict(data)
        self.assertEqual(RunConfig.from_dict({"q0": 8, "epsilon": None}).q0, 8)

    @patch("relbackflow.config.ensure_directory", return_value=False)
    def test_save_reports_directory_failure(self, mock_ensure):
        """Test OSError when the target directory cannot be created."""
        with self.assertRaises(OSError):
            RunConfig().save(os.path.join(self.test_dir, "nested", "run.json"))
        mock_ensure.assert_called_once()

    def test_merged_overrides(self):
        """Test that merged replaces only the given fields."""
        base = RunConfig(epsilon=2.0, n0=60)
        merged = base.merged({"epsilon": 1.0})
        self.assertEqual(merged.epsilon, 1.0)
        self.assertEqual(merged.n0, 60)
        self.assertEqual(base.epsilon, 2.0)

    def test_solver_extraction(self):
        """Test that solver() carries the grid and tolerance fields."""
        solver = RunConfig(q0=8.0, h_max=4, method="dense").solver()
        self.assertEqual(solver, SolverConfig(q0=8.0, h_max=4, method="dense"))


if __name__ == "__main__":
    unittest.main()
