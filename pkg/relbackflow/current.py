"""
Probability current at the origin and its integrated flux.

The current is built from the Dirac current c (psi1* psi2 + psi2* psi1)
of a positive-energy wavepacket with envelope g(r). In dimensionless time
tau = t/T and current J = T j(0, t),

    J(tau) = 4/(pi eps) Re[conj(A(tau)) B(tau)],
    A(tau) = sum_i w_i U1(r_i) g(r_i) exp(-4i gamma(r_i) tau / eps^2),

with B(tau) the same sum over U2. Integrating J over [0, 1] reproduces the
quadratic form of the flux kernel, so the flux of the optimal state equals
its eigenvalue.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from .eigensolver import EigenSolution
from .exceptions import DomainError
from .kernel import KernelMatrix
from .params import EpsilonParams, QuadGrid, gamma

logger = logging.getLogger(__name__)

DEFAULT_N_TAU = 4001
NORMALIZATION_TOL = 1e-6

# Time samples evaluated per block.
TAU_BLOCK = 512


@dataclass(frozen=True, eq=False)
class Envelope:
    """Complex momentum envelope g(r_i) sampled on a grid."""

    grid: QuadGrid
    values: np.ndarray

    @property
    def norm(self) -> float:
        """Weighted L2 norm squared, sum w |g|^2."""
        return self.grid.integrate(np.abs(self.values) ** 2)


@dataclass(frozen=True, eq=False)
class CurrentTrace:
    """Dimensionless current J(tau) over a time window and its flux over [0, 1]."""

    eps: EpsilonParams
    taus: np.ndarray
    J: np.ndarray
    delta: float

    def rows(self) -> List[Tuple[float, float]]:
        """(tau, J) pairs for CSV output."""
        return list(zip(self.taus.tolist(), self.J.tolist()))


def spinor_components(r: np.ndarray, eps: EpsilonParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Positive-energy spinor components U1, U2 at dimensionless momentum r.

    U2 uses eps r / sqrt(2 gamma (gamma + 1)), equal to
    sqrt((gamma - 1)/(2 gamma)) without the cancellation near r = 0.
    """
    g = gamma(np.asarray(r, dtype=float), eps)
    u1 = np.sqrt((g + 1.0) / (2.0 * g))
    u2 = eps.epsilon * np.asarray(r, dtype=float) / np.sqrt(2.0 * g * (g + 1.0))
    return u1, u2


def _phase(grid: QuadGrid, eps: EpsilonParams) -> np.ndarray:
    return np.exp(2j * gamma(grid.nodes, eps) / eps.epsilon ** 2)


def envelope_from_eigvec(sol: EigenSolution) -> Envelope:
    """
    Attach the phase exp(+2i gamma(r)/eps^2) to a real eigenvector.

    Args:
        sol: Converged eigen solution with eps > 0

    Returns:
        Envelope with |g| = |eta| pointwise

    Raises:
        DomainError: If the solution is non-relativistic
    """
    if sol.eps.is_nonrelativistic:
        raise DomainError("current reconstruction needs eps > 0")
    return Envelope(grid=sol.grid, values=_phase(sol.grid, sol.eps) * sol.eta)


def envelope_from_samples(grid: QuadGrid, eta: np.ndarray, eps: EpsilonParams) -> Envelope:
    """
    Build a normalized envelope from arbitrary real samples, e.g. a trial function.

    Args:
        grid: Grid the samples live on
        eta: Real samples at the grid nodes
        eps: Relativity parameter (> 0)

    Returns:
        Envelope normalized to unit weighted L2 norm

    Raises:
        DomainError: If eps == 0 or the samples vanish on the grid
    """
    if eps.is_nonrelativistic:
        raise DomainError("current reconstruction needs eps > 0")
    eta = np.asarray(eta, dtype=float)
    norm = math.sqrt(grid.integrate(eta * eta))
    if not norm > 1e-12:
        raise DomainError("samples vanish on the grid")
    return Envelope(grid=grid, values=_phase(grid, eps) * eta / norm)


def default_n_tau(eps: EpsilonParams, span: float = 1.0) -> int:
    """Time samples needed to resolve O(1/eps^2) oscillations over a window of length span."""
    return max(math.ceil(DEFAULT_N_TAU * span), math.ceil(40.0 * span / eps.epsilon ** 2))


def _sample_current(env: Envelope, eps: EpsilonParams, taus: np.ndarray) -> np.ndarray:
    grid = env.grid
    u1, u2 = spinor_components(grid.nodes, eps)
    a_coeff = grid.weights * u1 * env.values
    b_coeff = grid.weights * u2 * env.values
    frequency = 4.0 * gamma(grid.nodes, eps) / eps.epsilon ** 2

    current = np.empty(taus.size)
    for start in range(0, taus.size, TAU_BLOCK):
        stop = min(start + TAU_BLOCK, taus.size)
        phase = np.exp(-1j * np.outer(taus[start:stop], frequency))
        a = phase @ a_coeff
        b = phase @ b_coeff
        current[start:stop] = np.real(np.conj(a) * b)
    return current * (4.0 / (math.pi * eps.epsilon))


def current_trace(
    env: Envelope,
    eps: EpsilonParams,
    n_tau: Optional[int] = None,
    tau_min: float = 0.0,
    tau_max: float = 1.0,
) -> CurrentTrace:
    """
    Sample the current at the origin over a time window and integrate it over [0, 1].

    The window defaults to the backflow interval [0, 1]. A wider window
    shows the current around it; delta is always the flux over [0, 1],
    taken from the window samples when the window is [0, 1] and from a
    separate default-resolution sampling otherwise.

    Args:
        env: Normalized envelope
        eps: Relativity parameter (> 0)
        n_tau: Number of time samples in the window
            (default max(4001, ceil(40/eps^2)) per unit length)
        tau_min: Window start
        tau_max: Window end (> tau_min)

    Returns:
        CurrentTrace with the trapezoidal flux delta

    Raises:
        DomainError: For eps == 0, n_tau < 2, an empty window or an
            unnormalized envelope
    """
    if eps.is_nonrelativistic:
        raise DomainError("current reconstruction needs eps > 0")
    if not (math.isfinite(tau_min) and math.isfinite(tau_max) and tau_max > tau_min):
        raise DomainError(f"tau window must satisfy tau_min < tau_max, got [{tau_min}, {tau_max}]")
    span = tau_max - tau_min
    if n_tau is None:
        n_tau = default_n_tau(eps, span)
    if n_tau < 2:
        raise DomainError(f"n_tau must be >= 2, got {n_tau}")
    deviation = abs(env.norm - 1.0)
    if deviation > NORMALIZATION_TOL:
        raise DomainError(f"envelope is not normalized (|norm - 1| = {deviation:.3e})")

    taus = np.linspace(tau_min, tau_max, n_tau)
    current = _sample_current(env, eps, taus)

    # Flux over the backflow interval
    if tau_min == 0.0 and tau_max == 1.0:
        delta = float(trapezoid(current, taus))
    else:
        unit = np.linspace(0.0, 1.0, default_n_tau(eps))
        delta = float(trapezoid(_sample_current(env, eps, unit), unit))
    logger.debug(
        "eps=%g window=[%g, %g] n_tau=%d flux=%.8f", eps.epsilon, tau_min, tau_max, n_tau, delta
    )
    return CurrentTrace(eps=eps, taus=taus, J=current, delta=delta)


def rayleigh_quotient(eta: np.ndarray, matrix: KernelMatrix) -> float:
    """
    Backflow of a real grid function under the discretized operator.

    Args:
        eta: Samples eta(r_i) on the matrix grid
        matrix: Assembled KernelMatrix

    Returns:
        v^T M v / v^T v with v = sqrt(w) * eta

    Raises:
        DomainError: For a zero vector or a size mismatch
    """
    eta = np.asarray(eta, dtype=float)
    if eta.shape != (matrix.size,):
        raise DomainError(f"vector of shape {eta.shape} does not match a {matrix.size} grid")
    v = matrix.grid.sqrt_weights * eta
    norm2 = float(v @ v)
    if norm2 == 0.0:
        raise DomainError("Rayleigh quotient of the zero vector")
    return float(v @ (matrix.entries @ v)) / norm2


def count_sign_changes(trace: CurrentTrace) -> int:
    """Number of sign changes of J along the time grid; zeros are skipped."""
    signs = np.sign(trace.J)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def negative_intervals(trace: CurrentTrace) -> List[Tuple[float, float]]:
    """
    Time intervals over which the current is negative.

    Args:
        trace: Sampled current

    Returns:
        List of (tau_start, tau_end) pairs in sample resolution
    """
    negative = trace.J < 0
    intervals = []
    start: Optional[float] = None
    for tau, is_negative in zip(trace.taus, negative):
        if is_negative and start is None:
            start = float(tau)
        elif not is_negative and start is not None:
            intervals.append((start, float(tau)))
            start = None
    if start is not None:
        intervals.append((start, float(trace.taus[-1])))
    return intervals
