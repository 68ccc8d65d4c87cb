"""
Tests for the writers module.
"""

import os
import shutil
import unittest
from unittest.mock import patch

from relbackflow.writers import ResultWriter


class TestResultWriter(unittest.TestCase):
    """Test cases for the ResultWriter class."""

    def setUp(self):
        """Set up test fixtures."""
        self.test_dir = os.path.join(os.path.dirname(__file__), "test_data", "writers")
        os.makedirs(self.test_dir, exist_ok=True)

    def tearDown(self):
        """Clean up test fixtures."""
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def test_json_round_trip(self):
        """Test writing and reading a JSON artifact."""
        path = os.path.join(self.test_dir, "nested", "result.json")
        data = {"lambda": -0.024981234567891234, "eta": [0.1, 0.2], "h_final": 4}
        self.assertTrue(ResultWriter.write_json(data, path))
        self.assertEqual(ResultWriter.read_json(path), data)

    def test_json_is_sorted(self):
        """Test sorted keys and trailing newline."""
        path = os.path.join(self.test_dir, "sorted.json")
        ResultWriter.write_json({"b": 1, "a": 2}, path)
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
        self.assertLess(text.index('"a"'), text.index('"b"'))
        self.assertTrue(text.endswith("}\n"))

    def test_csv_format(self):
        """Test full precision, nan and empty cells."""
        path = os.path.join(self.test_dir, "table.csv")
        rows = [[0.1, float("nan"), None], [2, -0.5, 0.25]]
        self.assertTrue(ResultWriter.write_csv(["x", "y", "z"], rows, path))
        with open(path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], "x,y,z")
        self.assertEqual(lines[1], "1.0000000000000001e-01,nan,")
        self.assertEqual(lines[2], "2,-5.0000000000000000e-01,2.5000000000000000e-01")

    def test_csv_round_trip(self):
        """Test that read_csv recovers the written values."""
        path = os.path.join(self.test_dir, "round.csv")
        ResultWriter.write_csv(["tau", "J"], [(0.0, -0.01), (0.5, 1.0 / 3.0)], path)
        columns = ResultWriter.read_csv(path)
        self.assertEqual(columns["tau"], [0.0, 0.5])
        self.assertEqual(columns["J"], [-0.01, 1.0 / 3.0])

    def test_csv_rejects_ragged_rows(self):
        """Test that rows of the wrong width are not written."""
        path = os.path.join(self.test_dir, "ragged.csv")
        self.assertFalse(ResultWriter.write_csv(["a", "b"], [[1.0]], path))
        self.assertFalse(os.path.exists(path))

    @patch("builtins.open", side_effect=OSError("disk full"))
    def test_write_failure(self, mock_open):
        """Test that I/O errors are reported as False."""
        path = os.path.join(self.test_dir, "fail.json")
        self.assertFalse(ResultWriter.write_json({"a": 1}, path))
        self.assertFalse(ResultWriter.write_csv(["a"], [[1.0]], path))

    @patch("relbackflow.writers.ensure_directory", return_value=False)
    def test_directory_failure(self, mock_ensure):
        """Test that an uncreatable output directory is reported as False."""
        path = os.path.join(self.test_dir, "nested", "out.json")
        self.assertFalse(ResultWriter.write_json({"a": 1}, path))
        self.assertFalse(ResultWriter.write_csv(["a"], [[1.0]], path))
        mock_ensure.assert_called_with(os.path.join(os.path.abspath(self.test_dir), "nested"))

    def test_creates_nested_directories(self):
        """Test that missing parent directories are created."""
        path = os.path.join(self.test_dir, "a", "b", "out.csv")
        self.assertTrue(ResultWriter.write_csv(["a"], [[1.0]], path))
        self.assertTrue(os.path.exists(path))

    def test_read_missing_files(self):
        """Test that missing files read as None."""
        missing = os.path.join(self.test_dir, "missing")
        self.assertIsNone(ResultWriter.read_json(missing + ".json"))
        self.assertIsNone(ResultWriter.read_csv(missing + ".csv"))


if __name__ == "__main__":
    unittest.main()
