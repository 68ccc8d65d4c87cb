"""
Run configuration for the command-line interface.

Values come from three layers: the defaults below, an optional JSON file
given with --config, and explicit command-line flags, later layers
overriding earlier ones.
"""

import json
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional

from .exceptions import DomainError
from .utils import ensure_directory


# Numeric fields and the types a config file may give them.
REAL_FIELDS = ("epsilon", "q0", "eig_tol", "refine_tol")
INTEGER_FIELDS = ("n0", "h_max", "max_iter", "n_tau", "restarts", "seed")
REAL_LIST_FIELDS = ("epsilons", "params", "tau_range")


def _is_real(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _is_integer(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _check_types(data: Dict[str, Any]) -> None:
    for name in REAL_FIELDS:
        value = data.get(name)
        if value is not None and not _is_real(value):
            raise DomainError(f"configuration value {name}={value!r} must be a number")
    for name in INTEGER_FIELDS:
        value = data.get(name)
        if value is not None and not _is_integer(value):
            raise DomainError(f"configuration value {name}={value!r} must be an integer")
    for name in REAL_LIST_FIELDS:
        value = data.get(name)
        if value is not None and not (
            isinstance(value, (list, tuple)) and all(_is_real(item) for item in value)
        ):
            raise DomainError(f"configuration value {name}={value!r} must be a list of numbers")


@dataclass(frozen=True)
class SolverConfig:
    """Settings of the grid-refinement eigen-solve."""

    q0: float = 6.0
    n0: int = 200
    eig_tol: float = 1e-8
    refine_tol: float = 5e-5
    h_max: int = 16
    max_iter: int = 200000
    method: str = "power"

    def solver_kwargs(self) -> Dict[str, Any]:
        """Keyword arguments for solve_converged / solve_nonrel."""
        return asdict(self)


def _default_epsilons() -> List[float]:
    return [round(0.1 * k, 1) for k in range(1, 26)]


@dataclass
class RunConfig:
    """Every CLI parameter with its default."""

    epsilon: Optional[float] = None
    epsilons: List[float] = field(default_factory=_default_epsilons)
    q0: float = 6.0
    n0: int = 200
    eig_tol: float = 1e-8
    refine_tol: float = 5e-5
    h_max: int = 16
    max_iter: int = 200000
    method: str = "power"
    n_tau: Optional[int] = None
    tau_range: List[float] = field(default_factory=lambda: [0.0, 1.0])
    family: str = "bessel"
    families: List[str] = field(default_factory=lambda: ["airy", "bessel"])
    mode: str = "maximize"
    restarts: int = 200
    seed: int = 0
    a6_fixed: bool = False
    weighted: bool = True
    verbose_trace: bool = False
    with_fits: bool = False
    trial: Optional[str] = None
    params: Optional[List[float]] = None
    out: Optional[str] = None
    dump_matrix: Optional[str] = None
    verbose: bool = False

    def solver(self) -> SolverConfig:
        """Extract the eigen-solver settings."""
        return SolverConfig(
            q0=self.q0,
            n0=self.n0,
            eig_tol=self.eig_tol,
            refine_tol=self.refine_tol,
            h_max=self.h_max,
            max_iter=self.max_iter,
            method=self.method,
        )

    def to_dict(self) -> Dict[str, Any]:
        """JSON-serializable form."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """
        Build a config from a dictionary, rejecting unknown keys and
        non-numeric values of numeric fields.

        Args:
            data: Mapping of field names to values

        Returns:
            RunConfig with the given values over the defaults
        """
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise DomainError(f"unknown configuration keys: {', '.join(unknown)}")
        _check_types(data)
        return cls(**data)

    def merged(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Return a copy with the given fields replaced."""
        data = self.to_dict()
        data.update(overrides)
        return RunConfig.from_dict(data)

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        """
        Read a config file written by save.

        Args:
            path: JSON file path

        Returns:
            RunConfig
        """
        with open(os.path.normpath(path), "r", encoding="utf-8") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise DomainError("configuration file must contain a JSON object")
        return cls.from_dict(data)

    def save(self, path: str) -> None:
        """Write the config as JSON."""
        normalized_path = os.path.normpath(path)
        directory = os.path.dirname(os.path.abspath(normalized_path))
        if not ensure_directory(directory):
            raise OSError(f"could not create directory {directory}")
        with open(normalized_path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
