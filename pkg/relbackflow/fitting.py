"""
Airy and Bessel trial wavefunctions for the backflow eigenvector.

A trial has the form F(x) / (a4 r + a5)^a6 with x = a1 (r + a2)^a3 and
F = Ai or J0. Two campaigns are supported, both driven by seeded random
restarts of a bounded Nelder-Mead search:

- maximize: choose a1..a6 to make the trial's flux as negative as possible;
- match: choose a1..a6 to best fit the numerical eigenvector, then report
  the flux the fitted trial achieves.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.optimize

from .eigensolver import EigenSolution, solve_converged
from .exceptions import DomainError, FitError
from .kernel import KernelMatrix, assemble
from .params import EpsilonParams
from .special import airy_ai, bessel_j0

logger = logging.getLogger(__name__)

LOWER = np.array([-10.0, 0.0, 0.0, 0.0, 1e-6, 0.0])
UPPER = np.array([0.0, 10.0, 10.0, 10.0, 10.0, 10.0])
A6_FIXED = 2.0 / 3.0

DEFAULT_RESTARTS = 5000
FAST_RESTARTS = 200
MAX_FEV = 2000
OBJECTIVE_TOL = 1e-8

# Objective values for trials that vanish or overflow on the grid.
DEGENERATE_FLUX = 1.0
DEGENERATE_RESIDUAL = 10.0

MIN_NORM = 1e-12

MODES = ("maximize", "match")


class Family(str, Enum):
    """Special function used by a trial."""

    AIRY = "airy"
    BESSEL = "bessel"


# Bessel optima near eps = 0.9 and at eps = 1.0.
BESSEL_ANCHORS: Dict[float, Tuple[float, ...]] = {
    0.9: (-1.347, 0.603, 0.986, 0.341, 0.435, 0.715),
    1.0: (-1.176, 0.763, 0.971, 0.332, 0.445, 0.751),
}


def _as_family(family: Union[str, Family]) -> Family:
    try:
        return Family(str(family.value if isinstance(family, Family) else family).lower())
    except ValueError:
        raise DomainError(f"unknown trial family {family!r}") from None


@dataclass(frozen=True)
class TrialParams:
    """Family tag and coefficients a1..a6 of a trial wavefunction."""

    family: Family
    a: Tuple[float, ...]
    a6_fixed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", _as_family(self.family))
        a = tuple(float(x) for x in self.a)
        if len(a) != 6:
            raise DomainError(f"trial needs six coefficients, got {len(a)}")
        values = np.asarray(a)
        if not np.all(np.isfinite(values)):
            raise DomainError("trial coefficients must be finite")
        if np.any(values < LOWER) or np.any(values > UPPER):
            raise DomainError(f"trial coefficients {a} leave the parameter box")
        if self.a6_fixed and a[5] != A6_FIXED:
            raise DomainError("a6_fixed trials must have a6 = 2/3")
        object.__setattr__(self, "a", a)

    @classmethod
    def from_free(
        cls, family: Union[str, Family], free: Sequence[float], a6_fixed: bool
    ) -> "TrialParams":
        """Build params from optimizer coordinates (five of them when a6 is fixed)."""
        values = [float(x) for x in free]
        if a6_fixed:
            values = values[:5] + [A6_FIXED]
        return cls(family=_as_family(family), a=tuple(values), a6_fixed=a6_fixed)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-friendly form."""
        return {"family": self.family.value, "a": list(self.a), "a6_fixed": self.a6_fixed}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrialParams":
        """Inverse of to_dict."""
        return cls(family=data["family"], a=tuple(data["a"]), a6_fixed=data["a6_fixed"])


@dataclass(frozen=True, eq=False)
class FitResult:
    """Best trial found by a restart campaign."""

    params: TrialParams
    delta: float
    residual: Optional[float]
    restarts_used: int
    seed: int
    mode: str
    epsilon: float
    trace: List[Optional[float]] = field(default_factory=list)

    def to_dict(self, verbose: bool = False) -> Dict[str, Any]:
        """
        Convert to a JSON-serializable dictionary.

        Args:
            verbose: Include the best-so-far trace over restarts

        Returns:
            Dictionary describing the fit
        """
        data = {
            "epsilon": self.epsilon,
            "mode": self.mode,
            "params": self.params.to_dict(),
            "delta": self.delta,
            "residual": self.residual,
            "restarts_used": self.restarts_used,
            "seed": self.seed,
        }
        if verbose:
            data["trace"] = list(self.trace)
        return data


def _samples(family: Family, a: Sequence[float], r: np.ndarray) -> Optional[np.ndarray]:
    """Trial values at r, or None when the argument overflows."""
    a1, a2, a3, a4, a5, a6 = a
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        x = a1 * np.power(r + a2, a3)
        if not np.all(np.isfinite(x)):
            return None
        if family is Family.AIRY:
            numerator = airy_ai(x)
        else:
            numerator = bessel_j0(x)
        values = numerator / np.power(a4 * r + a5, a6)
    if not np.all(np.isfinite(values)):
        return None
    return values


def trial_eval(p: TrialParams, r: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Evaluate a trial wavefunction.

    Args:
        p: Trial parameters
        r: Dimensionless momentum (scalar or array, >= 0)

    Returns:
        F(a1 (r + a2)^a3) / (a4 r + a5)^a6

    Raises:
        DomainError: For negative r or a non-finite evaluation
    """
    r_values = np.asarray(r, dtype=float)
    if np.any(r_values < 0):
        raise DomainError("trial functions are defined for r >= 0")
    values = _samples(p.family, p.a, r_values)
    if values is None:
        raise DomainError(f"trial {p.a} does not evaluate finitely")
    if values.ndim == 0:
        return float(values)
    return values


def _normalized(samples: Optional[np.ndarray], weights: np.ndarray) -> Optional[np.ndarray]:
    if samples is None:
        return None
    norm = math.sqrt(float(np.dot(weights, samples * samples)))
    if not norm > MIN_NORM:
        return None
    return samples / norm


def _flux(samples: np.ndarray, matrix: KernelMatrix) -> float:
    v = matrix.grid.sqrt_weights * samples
    return float(v @ (matrix.entries @ v)) / float(v @ v)


def backflow_of_trial(p: TrialParams, matrix: KernelMatrix) -> float:
    """
    Flux achieved by a trial used as the real eigenvector surrogate.

    Args:
        p: Trial parameters
        matrix: Assembled kernel matrix for the (eps, grid) of interest

    Returns:
        Rayleigh quotient of the normalized trial samples

    Raises:
        DomainError: If the trial vanishes (norm < 1e-12) or overflows on the grid
    """
    samples = _normalized(_samples(p.family, p.a, matrix.grid.nodes), matrix.grid.weights)
    if samples is None:
        raise DomainError(f"trial {p.a} is degenerate on the grid")
    return _flux(samples, matrix)


def _match_residual(
    samples: np.ndarray, target: np.ndarray, weights: np.ndarray, weighted: bool
) -> float:
    residuals = []
    for sign in (1.0, -1.0):
        deviation = (sign * samples - target) ** 2
        if weighted:
            residuals.append(float(np.dot(weights, deviation) / np.sum(weights)))
        else:
            residuals.append(float(np.mean(deviation)))
    return min(residuals)


def _bounds(a6_fixed: bool) -> Tuple[np.ndarray, np.ndarray]:
    if a6_fixed:
        return LOWER[:5], UPPER[:5]
    return LOWER, UPPER


def _free(a: Sequence[float], a6_fixed: bool) -> np.ndarray:
    values = np.clip(np.asarray(a, dtype=float), LOWER, UPPER)
    return values[:5] if a6_fixed else values


def _full(free: np.ndarray, a6_fixed: bool) -> np.ndarray:
    if a6_fixed:
        return np.append(free, A6_FIXED)
    return free


def _campaign(
    objective: Callable[[np.ndarray], Tuple[float, bool]],
    restarts: int,
    seed: int,
    a6_fixed: bool,
    warm_starts: Iterable[Sequence[float]],
) -> Tuple[np.ndarray, float, List[Optional[float]], int, int]:
    """
    Run warm starts followed by seeded random restarts.

    Restart k draws its start from a generator seeded with (seed, k), so the
    outcome does not depend on evaluation order.

    Returns:
        (best full coefficient vector, best objective, best-so-far trace,
        local searches run, degenerate optima)
    """
    if restarts < 1:
        raise DomainError(f"restarts must be >= 1, got {restarts}")
    if seed < 0:
        raise DomainError(f"seed must be non-negative, got {seed}")
    lower, upper = _bounds(a6_fixed)
    bounds = list(zip(lower, upper))

    def scalar(x: np.ndarray) -> float:
        return objective(_full(np.clip(x, lower, upper), a6_fixed))[0]

    starts = [_free(a, a6_fixed) for a in warm_starts]
    for index in range(restarts):
        rng = np.random.default_rng([seed, index])
        starts.append(rng.uniform(lower, upper))

    best_a: Optional[np.ndarray] = None
    best_value = math.inf
    trace: List[Optional[float]] = []
    degenerate = 0
    for x0 in starts:
        result = scipy.optimize.minimize(
            scalar,
            x0,
            method="Nelder-Mead",
            bounds=bounds,
            options={"maxfev": MAX_FEV, "fatol": OBJECTIVE_TOL, "xatol": OBJECTIVE_TOL},
        )
        candidate = _full(np.clip(result.x, lower, upper), a6_fixed)
        value, ok = objective(candidate)
        if not ok:
            degenerate += 1
        elif value < best_value or (
            value == best_value and best_a is not None and tuple(candidate) < tuple(best_a)
        ):
            best_a, best_value = candidate, value
        trace.append(best_value if best_a is not None else None)

    if best_a is None:
        raise FitError(
            f"all {len(starts)} restarts produced degenerate trials",
            degenerate=degenerate,
            restarts=len(starts),
        )
    return best_a, best_value, trace, len(starts), degenerate


def _anchors(family: Family, use_anchors: bool) -> List[Tuple[float, ...]]:
    if use_anchors and family is Family.BESSEL:
        return [BESSEL_ANCHORS[key] for key in sorted(BESSEL_ANCHORS)]
    return []


def maximize_backflow(
    family: Union[str, Family],
    eps: EpsilonParams,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    a6_fixed: bool = False,
    matrix: Optional[KernelMatrix] = None,
    warm_starts: Optional[Iterable[Sequence[float]]] = None,
    use_anchors: bool = True,
) -> FitResult:
    """
    Search the trial family for the most negative flux.

    Args:
        family: "airy" or "bessel"
        eps: Relativity parameter
        restarts: Number of random restarts
        seed: Seed of the restart generators
        a6_fixed: Hold a6 at 2/3
        matrix: Kernel matrix to score against (default: the converged grid)
        warm_starts: Coefficient vectors searched before the random restarts
        use_anchors: Also warm-start from the committed Bessel optima

    Returns:
        FitResult with the best flux found

    Raises:
        FitError: If every restart ends on a degenerate trial
    """
    family = _as_family(family)
    if matrix is None:
        solution = solve_converged(eps)
        matrix = assemble(eps, solution.grid)
    weights = matrix.grid.weights
    nodes = matrix.grid.nodes

    def objective(a: np.ndarray) -> Tuple[float, bool]:
        samples = _normalized(_samples(family, a, nodes), weights)
        if samples is None:
            return DEGENERATE_FLUX, False
        return _flux(samples, matrix), True

    starts = list(warm_starts or []) + _anchors(family, use_anchors)
    best_a, best_value, trace, used, degenerate = _campaign(
        objective, restarts, seed, a6_fixed, starts
    )
    logger.info(
        "%s maximize eps=%g: delta=%.8f after %d searches (%d degenerate)",
        family.value, eps.epsilon, best_value, used, degenerate,
    )
    return FitResult(
        params=TrialParams.from_free(family, best_a, a6_fixed),
        delta=best_value,
        residual=None,
        restarts_used=used,
        seed=seed,
        mode="maximize",
        epsilon=eps.epsilon,
        trace=trace,
    )


def match_eigenvector(
    family: Union[str, Family],
    sol: EigenSolution,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    a6_fixed: bool = False,
    warm_starts: Optional[Iterable[Sequence[float]]] = None,
    weighted: bool = True,
    use_anchors: bool = True,
    matrix: Optional[KernelMatrix] = None,
) -> FitResult:
    """
    Least-squares fit of the trial family to the numerical eigenvector.

    The trial is normalized and multiplied by the sign that minimizes the
    residual before comparison.

    Args:
        family: "airy" or "bessel"
        sol: Converged eigen solution providing the target and grid
        restarts: Number of random restarts
        seed: Seed of the restart generators
        a6_fixed: Hold a6 at 2/3
        warm_starts: Coefficient vectors searched before the random restarts
        weighted: Quadrature-weighted residual (False for plain mean squares)
        use_anchors: Also warm-start from the committed Bessel optima
        matrix: Kernel matrix on sol.grid (assembled when omitted)

    Returns:
        FitResult with the residual and the flux of the fitted trial

    Raises:
        FitError: If every restart ends on a degenerate trial
    """
    family = _as_family(family)
    weights = sol.grid.weights
    nodes = sol.grid.nodes
    target = sol.eta

    def objective(a: np.ndarray) -> Tuple[float, bool]:
        samples = _normalized(_samples(family, a, nodes), weights)
        if samples is None:
            return DEGENERATE_RESIDUAL, False
        return _match_residual(samples, target, weights, weighted), True

    starts = list(warm_starts or []) + _anchors(family, use_anchors)
    best_a, best_value, trace, used, degenerate = _campaign(
        objective, restarts, seed, a6_fixed, starts
    )
    params = TrialParams.from_free(family, best_a, a6_fixed)
    if matrix is None:
        matrix = assemble(sol.eps, sol.grid)
    delta = backflow_of_trial(params, matrix)
    logger.info(
        "%s match eps=%g: residual=%.3e delta=%.8f after %d searches (%d degenerate)",
        family.value, sol.eps.epsilon, best_value, delta, used, degenerate,
    )
    return FitResult(
        params=params,
        delta=delta,
        residual=best_value,
        restarts_used=used,
        seed=seed,
        mode="match",
        epsilon=sol.eps.epsilon,
        trace=trace,
    )
