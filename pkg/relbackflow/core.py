"""
Core functionality for the relbackflow package.
"""

import logging
from typing import Dict, Optional, Sequence, Tuple

from .config import SolverConfig
from .current import (
    CurrentTrace,
    current_trace,
    envelope_from_eigvec,
    envelope_from_samples,
)
from .eigensolver import EigenSolution, solve_converged, solve_nonrel
from .exceptions import DomainError
from .fitting import FitResult, TrialParams, match_eigenvector, maximize_backflow, trial_eval
from .kernel import KernelMatrix, assemble
from .params import EpsilonParams
from .scan import FAMILIES, FIT_MODES, ScanRow, closed_form_flux, eigen_scan, fit_scan

logger = logging.getLogger(__name__)


class BackflowStudy:
    """Main class tying eigen-solves, currents, fits and scans to one solver setup."""

    def __init__(self, config: Optional[SolverConfig] = None):
        """
        Initialize the study.

        Args:
            config: Solver settings shared by every solve (defaults when omitted)
        """
        self.config = config or SolverConfig()
        self.solutions: Dict[float, EigenSolution] = {}
        self._matrices: Dict[float, KernelMatrix] = {}

    def solve(self, epsilon: float) -> EigenSolution:
        """
        Converged eigen solution at eps, cached per value.

        Args:
            epsilon: Relativity parameter (> 0)

        Returns:
            EigenSolution
        """
        if epsilon not in self.solutions:
            eps = EpsilonParams(epsilon)
            self.solutions[epsilon] = solve_converged(eps, **self.config.solver_kwargs())
        return self.solutions[epsilon]

    def solve_nonrel(self) -> EigenSolution:
        """Converged solution of the non-relativistic problem."""
        if 0.0 not in self.solutions:
            self.solutions[0.0] = solve_nonrel(**self.config.solver_kwargs())
        return self.solutions[0.0]

    def matrix(self, epsilon: float) -> KernelMatrix:
        """Kernel matrix on the converged grid at eps."""
        if epsilon not in self._matrices:
            solution = self.solve(epsilon)
            self._matrices[epsilon] = assemble(solution.eps, solution.grid)
        return self._matrices[epsilon]

    def current(
        self,
        epsilon: float,
        n_tau: Optional[int] = None,
        trial: Optional[TrialParams] = None,
        tau_range: Tuple[float, float] = (0.0, 1.0),
    ) -> CurrentTrace:
        """
        Current at the origin for the optimal state or a trial wavefunction.

        The trial is sampled on the converged grid at eps and normalized.

        Args:
            epsilon: Relativity parameter (> 0)
            n_tau: Number of time samples (eps-dependent default when omitted)
            trial: Trial parameters; the eigenvector is used when omitted
            tau_range: Sampled time window (tau_min, tau_max)

        Returns:
            CurrentTrace
        """
        solution = self.solve(epsilon)
        if trial is None:
            envelope = envelope_from_eigvec(solution)
        else:
            samples = trial_eval(trial, solution.grid.nodes)
            envelope = envelope_from_samples(solution.grid, samples, solution.eps)
        tau_min, tau_max = tau_range
        return current_trace(envelope, solution.eps, n_tau, tau_min=tau_min, tau_max=tau_max)

    def fit(
        self,
        family: str,
        epsilon: float,
        mode: str = "maximize",
        restarts: int = 200,
        seed: int = 0,
        a6_fixed: bool = False,
        weighted: bool = True,
    ) -> FitResult:
        """
        Run a trial-fit campaign against the converged solution at eps.

        Args:
            family: "airy" or "bessel"
            epsilon: Relativity parameter (> 0)
            mode: "maximize" or "match"
            restarts: Random restarts
            seed: Restart seed
            a6_fixed: Hold a6 at 2/3
            weighted: Quadrature-weighted match residual

        Returns:
            FitResult
        """
        if mode == "maximize":
            solution = self.solve(epsilon)
            return maximize_backflow(
                family, solution.eps, restarts, seed, a6_fixed, matrix=self.matrix(epsilon)
            )
        if mode == "match":
            return match_eigenvector(
                family,
                self.solve(epsilon),
                restarts,
                seed,
                a6_fixed,
                weighted=weighted,
                matrix=self.matrix(epsilon),
            )
        raise DomainError(f"unknown fit mode {mode!r}")

    def scan(
        self,
        epsilons: Sequence[float],
        with_fits: bool = False,
        families: Sequence[str] = FAMILIES,
        restarts: int = 200,
        seed: int = 0,
    ) -> Sequence[ScanRow]:
        """
        Eigenvalue scan over eps, optionally with trial-fit columns.

        Args:
            epsilons: Values of eps (> 0)
            with_fits: Add the six fit columns
            families: Fit families when with_fits is set
            restarts: Restarts per fit cell
            seed: Base seed of the fit cells

        Returns:
            List of ScanRow
        """
        if with_fits:
            return fit_scan(epsilons, families, FIT_MODES, restarts, seed, self.config)
        return eigen_scan(epsilons, self.config)

    @staticmethod
    def formula(epsilon: float) -> float:
        """Closed-form backflow magnitude at eps (eps = 0 allowed)."""
        return closed_form_flux(EpsilonParams(epsilon))
