"""
Exception classes for the relbackflow package.
"""

from typing import Any, Dict, List, Optional

import numpy as np


class BackflowError(Exception):
    """Base class for all errors raised by relbackflow."""


class DomainError(BackflowError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class ConvergenceError(BackflowError):
    """
    Raised when the eigensolver does not reach its residual tolerance.

    The best estimate found so far is kept on the exception so callers
    can still report it.
    """

    def __init__(
        self,
        msg: str,
        estimate: float,
        vector: Optional[np.ndarray] = None,
        residual: float = float("nan"),
        iterations: int = 0,
    ):
        super().__init__(msg)
        self.estimate = estimate
        self.vector = vector
        self.residual = residual
        self.iterations = iterations

    def diagnostics(self) -> Dict[str, Any]:
        """Return a JSON-friendly summary of the failed solve."""
        return {
            "error": str(self),
            "estimate": self.estimate,
            "residual": self.residual,
            "iterations": self.iterations,
        }


class RefinementError(BackflowError):
    """Raised when grid refinement reaches h_max without settling."""

    def __init__(self, msg: str, lambdas: List[float]):
        super().__init__(msg)
        self.lambdas = list(lambdas)

    def diagnostics(self) -> Dict[str, Any]:
        """Return a JSON-friendly summary including the eigenvalue sequence."""
        return {"error": str(self), "lambdas": self.lambdas}


class FitError(BackflowError):
    """Raised when no restart of a trial fit produced a usable trial."""

    def __init__(self, msg: str, degenerate: int = 0, restarts: int = 0):
        super().__init__(msg)
        self.degenerate = degenerate
        self.restarts = restarts

    def diagnostics(self) -> Dict[str, Any]:
        """Return a JSON-friendly summary of the failed campaign."""
        return {
            "error": str(self),
            "degenerate": self.degenerate,
            "restarts": self.restarts,
        }
