"""
Bessel J0 and Airy Ai for the trial wavefunction families.

Both wrap the Cephes-based routines in scipy.special; this module adds the
input validation the trial families rely on.
"""

from typing import Union

import numpy as np
import scipy.special

from .exceptions import DomainError

ArrayLike = Union[float, np.ndarray]


def _finite(x: ArrayLike, name: str) -> np.ndarray:
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{name} requires finite input")
    return values


def _unwrap(result: np.ndarray) -> ArrayLike:
    if np.ndim(result) == 0:
        return float(result)
    return result


def bessel_j0(x: ArrayLike) -> ArrayLike:
    """
    Bessel function of the first kind of order zero.

    Args:
        x: Finite real argument (scalar or array)

    Returns:
        J0(x)

    Raises:
        DomainError: For non-finite input
    """
    return _unwrap(scipy.special.j0(_finite(x, "bessel_j0")))


def airy_ai(x: ArrayLike) -> ArrayLike:
    """
    Airy function Ai.

    Args:
        x: Finite real argument (scalar or array)

    Returns:
        Ai(x)

    Raises:
        DomainError: For non-finite input
    """
    ai, _, _, _ = scipy.special.airy(_finite(x, "airy_ai"))
    return _unwrap(ai)
