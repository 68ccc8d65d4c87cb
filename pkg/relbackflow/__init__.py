"""
relbackflow - Maximal quantum backflow for a relativistic electron.

This package discretizes the backflow flux operator for a free Dirac
particle, finds its most negative eigenvalue as a function of the
relativity parameter eps, reconstructs the probability current of the
optimal state and fits Airy and Bessel trial wavefunctions to it.
"""

__version__ = "1.0.0"

from .core import BackflowStudy
from .eigensolver import EigenSolution, smallest_eig, solve_converged, solve_nonrel
from .exceptions import BackflowError, ConvergenceError, DomainError, FitError, RefinementError
from .params import EpsilonParams, build_grid, epsilon_from_physical

__all__ = [
    "BackflowError",
    "BackflowStudy",
    "ConvergenceError",
    "DomainError",
    "EigenSolution",
    "EpsilonParams",
    "FitError",
    "RefinementError",
    "build_grid",
    "epsilon_from_physical",
    "smallest_eig",
    "solve_converged",
    "solve_nonrel",
]
