"""
Module for writing solver results to JSON and CSV files.
"""

import csv
import json
import logging
import math
import os
from typing import Any, Dict, List, Optional, Sequence

from .utils import ensure_directory

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.16e"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return FLOAT_FORMAT % value
    if isinstance(value, int):
        return str(value)
    try:
        return FLOAT_FORMAT % float(value)
    except (TypeError, ValueError):
        return str(value)


def _prepare_path(output_path: str) -> str:
    # Normalize the output path
    normalized_path = os.path.normpath(output_path)

    # Create the output directory if needed
    output_dir = os.path.dirname(os.path.abspath(normalized_path))
    if not ensure_directory(output_dir):
        raise OSError(f"could not create directory {output_dir}")
    return normalized_path


class ResultWriter:
    """Class for persisting eigen solutions, scans, current traces and fits."""

    @staticmethod
    def write_json(data: Dict[str, Any], output_path: str) -> bool:
        """
        Write a dictionary as JSON.

        Keys are sorted and floats use their shortest round-trip repr, so
        identical results give byte-identical files.

        Args:
            data: JSON-serializable dictionary
            output_path: Path where the file will be saved

        Returns:
            bool: True if the file was written successfully, False otherwise
        """
        try:
            normalized_path = _prepare_path(output_path)
            with open(normalized_path, "w", encoding="utf-8") as f:
                json.dump(data, f, indent=2, sort_keys=True)
                f.write("\n")
            return True
        except (OSError, TypeError, ValueError) as e:
            logger.error("Error writing JSON file %s: %s", output_path, e)
            return False

    @staticmethod
    def write_csv(
        header: Sequence[str], rows: Sequence[Sequence[Any]], output_path: str
    ) -> bool:
        """
        Write rows of numbers as CSV with 17 significant digits.

        Args:
            header: Column names
            rows: Row values; None becomes an empty cell, NaN becomes "nan"
            output_path: Path where the file will be saved

        Returns:
            bool: True if the file was written successfully, False otherwise
        """
        # Reject ragged tables before touching the file
        width = len(header)
        for index, row in enumerate(rows):
            if len(row) != width:
                logger.error(
                    "Row %d has %d cells, expected %d; not writing %s",
                    index, len(row), width, output_path,
                )
                return False
        try:
            normalized_path = _prepare_path(output_path)
            with open(normalized_path, "w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(header)
                # One row per record, floats in full precision
                for row in rows:
                    writer.writerow([_cell(value) for value in row])
            return True
        except OSError as e:
            logger.error("Error writing CSV file %s: %s", output_path, e)
            return False

    @staticmethod
    def read_json(input_path: str) -> Optional[Dict[str, Any]]:
        """
        Read a JSON artifact.

        Args:
            input_path: Path of the file

        Returns:
            The decoded dictionary, or None if the file cannot be read
        """
        try:
            with open(os.path.normpath(input_path), "r", encoding="utf-8") as f:
                return json.load(f)
        except (OSError, ValueError) as e:
            logger.error("Error reading JSON file %s: %s", input_path, e)
            return None

    @staticmethod
    def read_csv(input_path: str) -> Optional[Dict[str, List[Optional[float]]]]:
        """
        Read a CSV artifact into columns.

        Args:
            input_path: Path of the file

        Returns:
            Mapping of column name to values (empty cells become None), or
            None if the file cannot be read
        """
        try:
            with open(os.path.normpath(input_path), "r", encoding="utf-8", newline="") as f:
                reader = csv.reader(f)
                header = next(reader)
                columns: Dict[str, List[Optional[float]]] = {name: [] for name in header}
                # Empty cells stand for missing values
                for row in reader:
                    for name, value in zip(header, row):
                        columns[name].append(float(value) if value != "" else None)
            return columns
        except (OSError, StopIteration, ValueError) as e:
            logger.error("Error reading CSV file %s: %s", input_path, e)
            return None
