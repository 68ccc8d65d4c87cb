"""
Dimensionless parameterization of the relativistic backflow problem.

All computation in the package happens in the dimensionless momentum r,
defined through p = m c eps r, and the relativity parameter
eps = sqrt(4 hbar / (m c^2 T)). Physical constants only appear in the
conversion helpers at the bottom of this module.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import DomainError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class EpsilonParams:
    """The relativity parameter eps; eps == 0 selects the non-relativistic kernel."""

    epsilon: float

    def __post_init__(self):
        value = float(self.epsilon)
        if not math.isfinite(value) or value < 0:
            raise DomainError(f"epsilon must be finite and >= 0, got {self.epsilon}")
        object.__setattr__(self, "epsilon", value)

    @property
    def is_nonrelativistic(self) -> bool:
        """True for the distinguished eps = 0 limit."""
        return self.epsilon == 0.0


@dataclass(frozen=True, eq=False)
class QuadGrid:
    """
    Uniform momentum grid with trapezoidal weights.

    The grid for refinement level h covers [0, q0*sqrt(h)] with n0*h nodes.
    """

    q0: float
    n0: int
    h: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        """Number of nodes."""
        return int(self.nodes.size)

    @property
    def upper(self) -> float:
        """Upper integration limit q0*sqrt(h)."""
        return float(self.nodes[-1])

    @property
    def spacing(self) -> float:
        """Node spacing."""
        return self.upper / (self.size - 1)

    @property
    def sqrt_weights(self) -> np.ndarray:
        """Square roots of the weights, used by the symmetrized operator."""
        return np.sqrt(self.weights)

    def integrate(self, samples: np.ndarray) -> float:
        """Apply the quadrature weights to samples taken at the nodes."""
        return float(np.dot(self.weights, samples))


def gamma(r: ArrayLike, eps: EpsilonParams) -> ArrayLike:
    """
    Relativistic factor as a function of dimensionless momentum.

    Args:
        r: Dimensionless momentum (scalar or array, >= 0)
        eps: Relativity parameter

    Returns:
        sqrt(1 + eps^2 r^2); exactly 1 when eps or r vanishes
    """
    result = np.hypot(1.0, eps.epsilon * np.asarray(r, dtype=float))
    if np.ndim(result) == 0:
        return float(result)
    return result


def momentum_scale(eps: EpsilonParams, mass: float, c: float) -> float:
    """
    Physical momentum corresponding to r = 1, i.e. m c eps.

    Args:
        eps: Relativity parameter
        mass: Particle mass in kg
        c: Speed of light in m/s

    Returns:
        Momentum unit in kg m/s
    """
    return mass * c * eps.epsilon


def epsilon_from_physical(mass: float, period: float, hbar: float, c: float) -> EpsilonParams:
    """
    Compute eps = sqrt(4 hbar / (m c^2 T)) from physical constants.

    Args:
        mass: Particle mass in kg
        period: Backflow period T in s
        hbar: Reduced Planck constant in J s
        c: Speed of light in m/s

    Returns:
        The corresponding EpsilonParams

    Raises:
        DomainError: If any argument is not strictly positive
    """
    for name, value in (("mass", mass), ("period", period), ("hbar", hbar), ("c", c)):
        if not (math.isfinite(value) and value > 0):
            raise DomainError(f"{name} must be strictly positive, got {value}")
    return EpsilonParams(math.sqrt(4.0 * hbar / (mass * c * c * period)))


def period_from_epsilon(eps: EpsilonParams, mass: float, hbar: float, c: float) -> float:
    """
    Invert the eps definition: T = 4 hbar / (m c^2 eps^2).

    Args:
        eps: Relativity parameter (must be > 0)
        mass: Particle mass in kg
        hbar: Reduced Planck constant in J s
        c: Speed of light in m/s

    Returns:
        Backflow period T in seconds
    """
    if eps.is_nonrelativistic:
        raise DomainError("eps = 0 corresponds to an infinite period")
    for name, value in (("mass", mass), ("hbar", hbar), ("c", c)):
        if not (math.isfinite(value) and value > 0):
            raise DomainError(f"{name} must be strictly positive, got {value}")
    return 4.0 * hbar / (mass * c * c * eps.epsilon ** 2)


def build_grid(q0: float, n0: int, h: int) -> QuadGrid:
    """
    Build the trapezoidal grid for refinement level h.

    Both the range and the node count grow with h: the range as sqrt(h),
    the node count linearly, so the node density also grows.

    Args:
        q0: Base upper integration limit
        n0: Base node count
        h: Refinement level

    Returns:
        QuadGrid with n0*h nodes on [0, q0*sqrt(h)]

    Raises:
        DomainError: For q0 <= 0, n0 < 2 or h < 1
    """
    if not (math.isfinite(q0) and q0 > 0):
        raise DomainError(f"q0 must be positive, got {q0}")
    if int(n0) != n0 or n0 < 2:
        raise DomainError(f"n0 must be an integer >= 2, got {n0}")
    if int(h) != h or h < 1:
        raise DomainError(f"h must be an integer >= 1, got {h}")
    n0, h = int(n0), int(h)

    count = n0 * h
    upper = q0 * math.sqrt(h)
    nodes = np.linspace(0.0, upper, count)
    step = upper / (count - 1)
    weights = np.full(count, step)
    weights[0] = weights[-1] = 0.5 * step

    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadGrid(q0=float(q0), n0=n0, h=h, nodes=nodes, weights=weights)
