"""
Backflow kernel evaluation and Nystrom assembly of the discretized operator.
"""

import logging
import math
import os
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import DomainError
from .params import EpsilonParams, QuadGrid, gamma
from .utils import ensure_directory

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Below this |x| sinc uses its Taylor series.
SINC_SERIES_CUTOFF = 1e-4

# Rows assembled per block; bounds the temporaries for large grids.
ASSEMBLY_BLOCK = 256


def sinc(x: ArrayLike) -> ArrayLike:
    """
    Unnormalized sinc, sin(x)/x with sinc(0) = 1.

    Args:
        x: Argument (scalar or array)

    Returns:
        sinc(x), using 1 - x^2/6 + x^4/120 for |x| < 1e-4
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    x2 = x * x
    result = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)
    if result.ndim == 0:
        return float(result)
    return result


def _check_momenta(r: ArrayLike, s: ArrayLike) -> None:
    if np.any(np.asarray(r) < 0) or np.any(np.asarray(s) < 0):
        raise DomainError("momenta must be non-negative")


def kernel_rel(r: ArrayLike, s: ArrayLike, eps: EpsilonParams) -> ArrayLike:
    """
    Relativistic flux kernel K(r, s).

    The sinc argument 2(gamma(r) - gamma(s))/eps^2 is evaluated as
    2(r^2 - s^2)/(gamma(r) + gamma(s)), which is exact and free of the
    cancellation in the difference of gammas.

    Args:
        r: Dimensionless momentum (scalar or array)
        s: Dimensionless momentum (scalar or array, broadcast against r)
        eps: Relativity parameter, must be > 0

    Returns:
        K(r, s); the diagonal equals 2r/(pi gamma(r))

    Raises:
        DomainError: If eps == 0 (use kernel_nonrel) or a momentum is negative
    """
    if eps.is_nonrelativistic:
        raise DomainError("kernel_rel requires eps > 0; use kernel_nonrel for eps = 0")
    _check_momenta(r, s)
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)

    gr = gamma(r, eps)
    gs = gamma(s, eps)
    numerator = r * (gs + 1.0) + s * (gr + 1.0)
    denominator = np.sqrt(gr * (gr + 1.0) * gs * (gs + 1.0))
    argument = 2.0 * (r - s) * (r + s) / (gr + gs)

    result = numerator / denominator * sinc(argument) / math.pi
    if np.ndim(result) == 0:
        return float(result)
    return result


def kernel_nonrel(r: ArrayLike, s: ArrayLike) -> ArrayLike:
    """
    Non-relativistic flux kernel sin(r^2 - s^2) / (pi (r - s)).

    Evaluated as (r + s) sinc((r - s)(r + s)) / pi so the diagonal needs
    no special case.

    Args:
        r: Dimensionless momentum (scalar or array)
        s: Dimensionless momentum (scalar or array)

    Returns:
        K(r, s); the diagonal equals 2r/pi
    """
    _check_momenta(r, s)
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    result = (r + s) * sinc((r - s) * (r + s)) / math.pi
    if np.ndim(result) == 0:
        return float(result)
    return result


def kernel(r: ArrayLike, s: ArrayLike, eps: EpsilonParams) -> ArrayLike:
    """Dispatch to kernel_nonrel for eps == 0 and kernel_rel otherwise."""
    if eps.is_nonrelativistic:
        return kernel_nonrel(r, s)
    return kernel_rel(r, s, eps)


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """
    Weight-symmetrized Nystrom matrix sqrt(w_i) K(r_i, r_j) sqrt(w_j).

    Eigenvectors of this matrix are sqrt(w) * eta; divide by sqrt(w) to
    recover samples of eta.
    """

    eps: EpsilonParams
    grid: QuadGrid
    entries: np.ndarray
    symmetrized: bool = True

    @property
    def size(self) -> int:
        """Matrix dimension."""
        return int(self.entries.shape[0])

    def to_csv(self, path: str) -> bool:
        """
        Dump the matrix row-major to a CSV file in full precision.

        Args:
            path: Output file path

        Returns:
            True if the file was written successfully, False otherwise
        """
        normalized_path = os.path.normpath(path)
        try:
            if not ensure_directory(os.path.dirname(os.path.abspath(normalized_path))):
                return False
            np.savetxt(normalized_path, self.entries, delimiter=",", fmt="%.16e")
            return True
        except OSError as e:
            logger.error("Error writing matrix dump %s: %s", normalized_path, e)
            return False


def assemble(eps: EpsilonParams, grid: QuadGrid) -> KernelMatrix:
    """
    Assemble the discretized backflow operator on a grid.

    Args:
        eps: Relativity parameter (0 routes to the non-relativistic kernel)
        grid: Quadrature grid

    Returns:
        Symmetric KernelMatrix
    """
    nodes = grid.nodes
    root_w = grid.sqrt_weights
    size = grid.size
    entries = np.empty((size, size))

    for start in range(0, size, ASSEMBLY_BLOCK):
        stop = min(start + ASSEMBLY_BLOCK, size)
        block = kernel(nodes[start:stop, None], nodes[None, :], eps)
        entries[start:stop] = root_w[start:stop, None] * block * root_w[None, :]

    # Exact symmetry; the formula is symmetric up to rounding.
    entries = 0.5 * (entries + entries.T)
    entries.setflags(write=False)
    logger.debug("Assembled %dx%d kernel matrix for eps=%g", size, size, eps.epsilon)
    return KernelMatrix(eps=eps, grid=grid, entries=entries)
