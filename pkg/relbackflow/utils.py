"""
Utility functions for the relbackflow package.
"""

import logging
import math
import os
from typing import Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

OUTPUT_EXTENSIONS = {
    "eigen": "json",
    "eigen-nonrel": "json",
    "fit": "json",
    "scan": "csv",
    "current": "csv",
}


def ensure_directory(directory: str) -> bool:
    """
    Ensure that a directory exists, create it if it doesn't.

    Args:
        directory: Directory path to ensure exists

    Returns:
        True if directory exists or was created successfully, False otherwise
    """
    try:
        os.makedirs(os.path.normpath(directory), exist_ok=True)
        return True
    except OSError as e:
        logger.error("Error creating directory %s: %s", directory, e)
        return False


def get_default_output_path(
    command: str, epsilon: Optional[float] = None, directory: str = "."
) -> str:
    """
    Generate a default artifact path for a command.

    Args:
        command: CLI command name
        epsilon: Relativity parameter included in the file name, if any
        directory: Directory the artifact goes in

    Returns:
        Path such as ./eigen_eps1.json or ./scan.csv
    """
    extension = OUTPUT_EXTENSIONS.get(command, "json")
    stem = command.replace("-", "_")
    if epsilon is not None:
        stem = f"{stem}_eps{epsilon:g}"
    return os.path.join(directory, f"{stem}.{extension}")


def diagnostic_path(output_path: str) -> str:
    """Path of the diagnostic JSON written next to a failed artifact."""
    root, _ = os.path.splitext(output_path)
    return f"{root}.error.json"


def validate_epsilon(epsilon: Optional[float], allow_zero: bool = False) -> Tuple[bool, str]:
    """
    Validate a relativity parameter.

    Args:
        epsilon: Value to validate
        allow_zero: Accept the non-relativistic value 0

    Returns:
        Tuple of (is_valid, error_message)
    """
    if epsilon is None:
        return False, "--epsilon is required"
    if isinstance(epsilon, bool) or not isinstance(epsilon, (int, float)):
        return False, "epsilon must be a number"
    if not math.isfinite(epsilon):
        return False, f"Invalid epsilon value: {epsilon}. Must be finite."
    if epsilon < 0 or (epsilon == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        return False, f"Invalid epsilon value: {epsilon}. Must be {bound}."
    return True, ""


def validate_epsilons(epsilons: Sequence[float]) -> Tuple[bool, str]:
    """
    Validate a list of relativity parameters for a scan.

    Args:
        epsilons: Values to validate

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not epsilons:
        return False, "The epsilon list is empty"
    for epsilon in epsilons:
        valid, message = validate_epsilon(epsilon)
        if not valid:
            return False, message
    return True, ""


def validate_grid(q0: float, n0: int, h_max: int) -> Tuple[bool, str]:
    """
    Validate the base grid and refinement settings.

    Args:
        q0: Base upper integration limit (> 0)
        n0: Base node count (>= 2)
        h_max: Largest refinement level (>= 2)

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not (math.isfinite(q0) and q0 > 0):
        return False, f"Invalid q0 value: {q0}. Must be positive."
    if n0 < 2:
        return False, f"Invalid n0 value: {n0}. Must be at least 2."
    if h_max < 2:
        return False, f"Invalid h_max value: {h_max}. Must be at least 2."
    return True, ""


def validate_n_tau(n_tau: Optional[int]) -> Tuple[bool, str]:
    """
    Validate the number of time samples of a current trace.

    Args:
        n_tau: Sample count, or None for the eps-dependent default

    Returns:
        Tuple of (is_valid, error_message)
    """
    if n_tau is not None and n_tau < 2:
        return False, f"Invalid n_tau value: {n_tau}. Must be at least 2."
    return True, ""


def validate_tau_range(tau_range: Sequence[float]) -> Tuple[bool, str]:
    """
    Validate the time window of a current trace.

    Args:
        tau_range: (tau_min, tau_max)

    Returns:
        Tuple of (is_valid, error_message)
    """
    if len(tau_range) != 2:
        return False, f"Invalid tau range: expected two values, got {len(tau_range)}."
    tau_min, tau_max = tau_range
    if not (math.isfinite(tau_min) and math.isfinite(tau_max) and tau_min < tau_max):
        return False, f"Invalid tau range: [{tau_min}, {tau_max}]. Need tau_min < tau_max."
    return True, ""


def validate_params(params: Optional[Sequence[float]]) -> Tuple[bool, str]:
    """
    Check that a trial parameter vector has six finite entries.

    Args:
        params: Coefficients a1..a6

    Returns:
        Tuple of (is_valid, error_message)
    """
    if params is None:
        return False, "--params is required with --trial"
    if len(params) != 6:
        return False, f"Expected 6 trial parameters, got {len(params)}"
    if not all(math.isfinite(value) for value in params):
        return False, "Trial parameters must be finite"
    return True, ""


def parse_float_list(text: str) -> Tuple[float, ...]:
    """
    Parse a comma-separated list of floats.

    Args:
        text: Text such as "0.1,0.5,1.0"

    Returns:
        Tuple of floats

    Raises:
        ValueError: If an entry is not a number
    """
    items = [item.strip() for item in text.split(",")]
    return tuple(float(item) for item in items if item)
