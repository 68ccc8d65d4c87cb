"""
Extremal eigenpair of the backflow operator and the grid-refinement protocol.

The backflow eigenvalue is the algebraically smallest eigenvalue of the
flux operator, whose spectrum lies in [lambda_min, 1]. Shifting by a
Gershgorin bound sigma makes it the dominant eigenvalue of sigma*I - M,
so plain power iteration finds it.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from .exceptions import ConvergenceError, DomainError, RefinementError
from .kernel import KernelMatrix, assemble
from .params import EpsilonParams, QuadGrid, build_grid

logger = logging.getLogger(__name__)

DEFAULT_Q0 = 6.0
DEFAULT_N0 = 200
DEFAULT_EIG_TOL = 1e-8
DEFAULT_REFINE_TOL = 5e-5
DEFAULT_H_MAX = 16
DEFAULT_MAX_ITER = 200000

METHODS = ("power", "dense")


@dataclass(frozen=True, eq=False)
class EigenSolution:
    """
    Converged backflow eigenpair on the final refinement grid.

    lam is the eigenvalue extrapolated to an infinite cutoff; lam_grid is
    the eigenvalue of the final discretized operator, the one eta belongs
    to and the one the flux of eta reproduces.
    """

    eps: EpsilonParams
    lam: float
    eta: np.ndarray
    grid: QuadGrid
    h_final: int
    iterations: int
    residual: float
    lambdas: List[float] = field(default_factory=list)
    method: str = "power"
    lam_grid: float = float("nan")

    def __post_init__(self) -> None:
        if np.isnan(self.lam_grid):
            object.__setattr__(self, "lam_grid", self.lam)

    @property
    def nodes(self) -> np.ndarray:
        """Grid nodes the eigenvector is sampled at."""
        return self.grid.nodes

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert to a JSON-serializable dictionary.

        Returns:
            Dictionary with epsilon, lambda, lambda_grid, h_final, iterations,
            residual, grid {q0, n0, h}, eta, nodes and the refinement sequence
        """
        return {
            "epsilon": self.eps.epsilon,
            "lambda": self.lam,
            "lambda_grid": self.lam_grid,
            "h_final": self.h_final,
            "iterations": self.iterations,
            "residual": self.residual,
            "grid": {"q0": self.grid.q0, "n0": self.grid.n0, "h": self.grid.h},
            "eta": [float(x) for x in self.eta],
            "nodes": [float(x) for x in self.grid.nodes],
            "lambdas": [float(x) for x in self.lambdas],
            "method": self.method,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EigenSolution":
        """
        Rebuild a solution from the output of to_dict.

        Args:
            data: Dictionary as produced by to_dict

        Returns:
            EigenSolution with the grid rebuilt from (q0, n0, h)
        """
        grid_info = data["grid"]
        grid = build_grid(grid_info["q0"], grid_info["n0"], grid_info["h"])
        eta = np.asarray(data["eta"], dtype=float)
        if eta.size != grid.size:
            raise DomainError("eta length does not match the stored grid")
        return cls(
            eps=EpsilonParams(data["epsilon"]),
            lam=float(data["lambda"]),
            eta=eta,
            grid=grid,
            h_final=int(data["h_final"]),
            iterations=int(data["iterations"]),
            residual=float(data["residual"]),
            lambdas=[float(x) for x in data.get("lambdas", [])],
            method=data.get("method", "power"),
            lam_grid=float(data.get("lambda_grid", "nan")),
        )


def _entries(matrix: Union[KernelMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(matrix, KernelMatrix):
        return matrix.entries
    entries = np.asarray(matrix, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {entries.shape}")
    return entries


def _default_start(matrix: Union[KernelMatrix, np.ndarray], size: int) -> np.ndarray:
    if isinstance(matrix, KernelMatrix):
        # exp(-r) overlaps the ground mode and is positive
        return np.exp(-matrix.grid.nodes) * matrix.grid.sqrt_weights
    return np.random.default_rng(0).standard_normal(size)


def gershgorin_shift(entries: np.ndarray) -> float:
    """
    Shift sigma = 1 + ||M||_inf bounding the spectrum from above.

    Args:
        entries: Square symmetric matrix

    Returns:
        The shift sigma
    """
    return 1.0 + float(np.max(np.sum(np.abs(entries), axis=1)))


class EigenPair(NamedTuple):
    """Eigenpair together with solver diagnostics."""

    lam: float
    vector: np.ndarray
    iterations: int
    residual: float


def smallest_eig(
    matrix: Union[KernelMatrix, np.ndarray],
    tol: float = DEFAULT_EIG_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    start: Optional[np.ndarray] = None,
    method: str = "power",
) -> Tuple[float, np.ndarray]:
    """
    Algebraically smallest eigenvalue and unit eigenvector of a symmetric matrix.

    Args:
        matrix: KernelMatrix or square symmetric array
        tol: Residual tolerance on ||M v - lambda v||_inf
        max_iter: Iteration budget for power iteration
        start: Optional start vector (symmetrized coordinates)
        method: "power" for shifted power iteration, "dense" for LAPACK

    Returns:
        Tuple of (lambda, unit eigenvector)

    Raises:
        DomainError: For bad tolerances, shapes or method names
        ConvergenceError: If power iteration exhausts max_iter
    """
    pair = extremal_eigenpair(matrix, tol, max_iter, start, method)
    return pair.lam, pair.vector


def extremal_eigenpair(
    matrix: Union[KernelMatrix, np.ndarray],
    tol: float = DEFAULT_EIG_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    start: Optional[np.ndarray] = None,
    method: str = "power",
) -> EigenPair:
    """Same as smallest_eig, also reporting iteration count and residual."""
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if method not in METHODS:
        raise DomainError(f"unknown eigen method {method!r}; expected one of {METHODS}")
    entries = _entries(matrix)
    size = entries.shape[0]

    if method == "dense":
        values, vectors = scipy.linalg.eigh(entries, subset_by_index=[0, 0])
        vector = vectors[:, 0]
        lam = float(values[0])
        residual = float(np.max(np.abs(entries @ vector - lam * vector)))
        return EigenPair(lam, vector, 1, residual)

    x = _default_start(matrix, size) if start is None else np.asarray(start, dtype=float)
    norm = np.linalg.norm(x)
    if x.shape != (size,) or norm == 0:
        raise DomainError("start vector must be a nonzero vector matching the matrix")
    x = x / norm

    sigma = gershgorin_shift(entries)
    lam = float("nan")
    residual = float("inf")
    for iteration in range(1, max_iter + 1):
        y = entries @ x
        lam = float(x @ y)
        residual = float(np.max(np.abs(y - lam * x)))
        if residual <= tol:
            return EigenPair(lam, x, iteration, residual)
        z = sigma * x - y
        x = z / np.linalg.norm(z)

    raise ConvergenceError(
        f"power iteration did not reach tol={tol:g} in {max_iter} iterations "
        f"(residual {residual:.3e})",
        estimate=lam,
        vector=x,
        residual=residual,
        iterations=max_iter,
    )


def _fix_sign(eta: np.ndarray) -> np.ndarray:
    if eta[np.argmax(np.abs(eta))] < 0:
        return -eta
    return eta


def _interpolate_start(previous: EigenSolution, grid: QuadGrid) -> np.ndarray:
    eta = np.interp(grid.nodes, previous.grid.nodes, previous.eta, right=0.0)
    return eta * grid.sqrt_weights


def extrapolate_cutoff(cutoffs: Sequence[float], lambdas: Sequence[float]) -> float:
    """
    Extrapolate refinement eigenvalues to an infinite integration cutoff.

    The truncated tail shifts the eigenvalue by an amount proportional to
    1/cutoff, so a straight-line fit of lambda against 1/cutoff is taken
    over the upper half of the levels and its intercept returned.

    Args:
        cutoffs: Upper integration limit of each level, increasing
        lambdas: Eigenvalue of each level

    Returns:
        Intercept of the fit at 1/cutoff = 0

    Raises:
        DomainError: If fewer than two levels are given
    """
    if len(cutoffs) != len(lambdas) or len(lambdas) < 2:
        raise DomainError("cutoff extrapolation needs at least two matching levels")
    first = min(len(lambdas) - 2, (len(lambdas) - 1) // 2)
    inverse = 1.0 / np.asarray(cutoffs[first:], dtype=float)
    _, intercept = np.polyfit(inverse, np.asarray(lambdas[first:], dtype=float), 1)
    return float(intercept)


def _refine(
    eps: EpsilonParams,
    q0: float,
    n0: int,
    eig_tol: float,
    refine_tol: float,
    h_max: int,
    max_iter: int,
    method: str,
) -> EigenSolution:
    if not (eig_tol > 0 and refine_tol > 0):
        raise DomainError("tolerances must be positive")
    if h_max < 2:
        raise DomainError(f"h_max must be >= 2 to compare refinement levels, got {h_max}")

    lambdas: List[float] = []
    cutoffs: List[float] = []
    previous: Optional[EigenSolution] = None
    for h in range(1, h_max + 1):
        grid = build_grid(q0, n0, h)
        matrix = assemble(eps, grid)
        start = None if previous is None else _interpolate_start(previous, grid)
        lam, vector, iterations, residual = extremal_eigenpair(
            matrix, tol=eig_tol, max_iter=max_iter, start=start, method=method
        )
        lambdas.append(lam)
        cutoffs.append(grid.upper)
        eta = _fix_sign(vector / grid.sqrt_weights)
        previous = EigenSolution(
            eps=eps,
            lam=lam,
            eta=eta,
            grid=grid,
            h_final=h,
            iterations=iterations,
            residual=residual,
            lambdas=list(lambdas),
            method=method,
        )
        logger.debug(
            "eps=%g h=%d n=%d lambda=%.10f iterations=%d",
            eps.epsilon, h, grid.size, lam, iterations,
        )
        if h > 1 and abs(lambdas[-1] - lambdas[-2]) < refine_tol:
            # Remove the truncation tail the grid sequence still carries
            limit = extrapolate_cutoff(cutoffs, lambdas)
            logger.info(
                "eps=%g converged at h=%d: lambda=%.8f (grid %.8f)",
                eps.epsilon, h, limit, lam,
            )
            return replace(previous, lam=limit, lam_grid=lam)

    raise RefinementError(
        f"eigenvalue did not settle to {refine_tol:g} by h_max={h_max} "
        f"(eps={eps.epsilon:g})",
        lambdas=lambdas,
    )


def solve_converged(
    eps: EpsilonParams,
    q0: float = DEFAULT_Q0,
    n0: int = DEFAULT_N0,
    eig_tol: float = DEFAULT_EIG_TOL,
    refine_tol: float = DEFAULT_REFINE_TOL,
    h_max: int = DEFAULT_H_MAX,
    max_iter: int = DEFAULT_MAX_ITER,
    method: str = "power",
) -> EigenSolution:
    """
    Solve the relativistic eigenproblem with progressive grid refinement.

    Levels h = 1, 2, ... use range q0*sqrt(h) and n0*h points; each level
    starts from the previous eigenvector interpolated onto the new grid.
    Refinement stops once consecutive eigenvalues differ by less than
    refine_tol; the reported lambda is then extrapolated in 1/cutoff from
    the upper half of the levels (see extrapolate_cutoff).

    Args:
        eps: Relativity parameter (> 0)
        q0: Base upper integration limit
        n0: Base node count
        eig_tol: Residual tolerance of each eigen-solve
        refine_tol: Tolerance on |lambda_h - lambda_{h-1}|
        h_max: Largest refinement level tried
        max_iter: Power-iteration budget per level
        method: Eigen method passed to smallest_eig

    Returns:
        EigenSolution on the final grid, lam extrapolated and lam_grid raw

    Raises:
        RefinementError: If h_max is reached without convergence
        ConvergenceError: If a level's eigen-solve fails
    """
    if eps.is_nonrelativistic:
        raise DomainError("solve_converged requires eps > 0; use solve_nonrel")
    return _refine(eps, q0, n0, eig_tol, refine_tol, h_max, max_iter, method)


def solve_nonrel(
    q0: float = DEFAULT_Q0,
    n0: int = DEFAULT_N0,
    eig_tol: float = DEFAULT_EIG_TOL,
    refine_tol: float = DEFAULT_REFINE_TOL,
    h_max: int = DEFAULT_H_MAX,
    max_iter: int = DEFAULT_MAX_ITER,
    method: str = "power",
) -> EigenSolution:
    """
    Run the refinement protocol on the non-relativistic kernel.

    Same arguments and errors as solve_converged, with eps fixed at 0.
    The converged eigenvalue approaches the backflow constant -0.0384517.
    """
    return _refine(EpsilonParams(0.0), q0, n0, eig_tol, refine_tol, h_max, max_iter, method)
