"""
Sweeps over eps: eigenvalue tables, the closed-form flux model and trial fits.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .config import SolverConfig
from .eigensolver import solve_converged
from .exceptions import BackflowError, DomainError
from .fitting import FAST_RESTARTS, match_eigenvector, maximize_backflow
from .kernel import assemble
from .params import EpsilonParams

logger = logging.getLogger(__name__)

# Non-relativistic backflow constant and the fine structure constant.
C_BF = 0.0384517
ALPHA = 0.0072973525693

DEFAULT_EPSILONS = tuple(round(0.1 * k, 1) for k in range(1, 26))
TABLE_EPSILONS = (0.10, 0.50, 0.80, 1.00, 1.60, 2.00, 2.50)
TABLE_MAGNITUDES = (0.03686, 0.03088, 0.02722, 0.02498, 0.01947, 0.01660, 0.01372)

FAMILIES = ("airy", "bessel")
FIT_MODES = ("max", "match", "match_a6")
FIT_COLUMNS = tuple(f"{family}_{mode}" for family in FAMILIES for mode in FIT_MODES)
BASE_COLUMNS = ("epsilon", "lambda", "model", "rel_err")


@dataclass
class ScanRow:
    """One eps of a scan; lambda and model are negative, rel_err compares magnitudes."""

    epsilon: float
    lam: float
    model: float
    rel_err: float
    fit_deltas: Optional[Dict[str, Optional[float]]] = None
    error: Optional[str] = None

    def values(self, with_fits: bool) -> List[Optional[float]]:
        """Cells in CSV column order."""
        cells: List[Optional[float]] = [self.epsilon, self.lam, self.model, self.rel_err]
        if with_fits:
            deltas = self.fit_deltas or {}
            cells.extend(deltas.get(column) for column in FIT_COLUMNS)
        return cells


def scan_header(with_fits: bool) -> List[str]:
    """CSV header for scan output."""
    header = list(BASE_COLUMNS)
    if with_fits:
        header.extend(FIT_COLUMNS)
    return header


def closed_form_flux(eps: EpsilonParams) -> float:
    """
    Closed-form model of the maximum backflow magnitude.

    Args:
        eps: Relativity parameter (>= 0)

    Returns:
        c_bf exp[-(4 eps / 9)(1 - 4 alpha eps)], positive
    """
    e = eps.epsilon
    return C_BF * math.exp(-(4.0 * e / 9.0) * (1.0 - 4.0 * ALPHA * e))


def _row(epsilon: float, lam: float) -> ScanRow:
    magnitude = closed_form_flux(EpsilonParams(epsilon))
    rel_err = abs((abs(lam) - magnitude) / magnitude)
    return ScanRow(epsilon=epsilon, lam=lam, model=-magnitude, rel_err=rel_err)


def _failed_row(epsilon: float, error: BackflowError) -> ScanRow:
    logger.warning("eps=%g failed: %s", epsilon, error)
    row = _row(epsilon, float("nan"))
    row.error = str(error)
    return row


def _check_epsilons(eps_list: Sequence[float]) -> None:
    if len(eps_list) == 0:
        raise DomainError("scan needs at least one eps value")
    bad = [e for e in eps_list if not (math.isfinite(e) and e > 0)]
    if bad:
        raise DomainError(f"scan eps values must be positive, got {bad}")


def eigen_scan(
    eps_list: Sequence[float], config: Optional[SolverConfig] = None
) -> List[ScanRow]:
    """
    Converged eigenvalue and model comparison for each eps.

    Args:
        eps_list: Values of eps (> 0), processed in order
        config: Solver settings (defaults when omitted)

    Returns:
        One ScanRow per eps; failed solves carry lam = nan and an error message
    """
    _check_epsilons(eps_list)
    config = config or SolverConfig()

    # A failed solve becomes a nan row and the scan moves on
    rows = []
    for epsilon in eps_list:
        try:
            solution = solve_converged(EpsilonParams(epsilon), **config.solver_kwargs())
        except BackflowError as e:
            rows.append(_failed_row(epsilon, e))
            continue
        rows.append(_row(epsilon, solution.lam))
    return rows


def cell_seed(seed: int, row: int, family: str, mode: str) -> int:
    """Deterministic seed for one (row, family, mode) cell of a fit scan."""
    sequence = np.random.SeedSequence(
        [seed, row, FAMILIES.index(family), FIT_MODES.index(mode)]
    )
    return int(sequence.generate_state(1)[0])


def fit_scan(
    eps_list: Sequence[float],
    families: Sequence[str] = FAMILIES,
    modes: Sequence[str] = FIT_MODES,
    restarts: int = FAST_RESTARTS,
    seed: int = 0,
    config: Optional[SolverConfig] = None,
) -> List[ScanRow]:
    """
    Eigen scan with trial-fit flux columns.

    Within each (eps, family) the match search with a6 = 2/3 runs first and
    seeds the unconstrained match, which in turn seeds the maximize search,
    so maximize never reports less backflow than match.

    Args:
        eps_list: Values of eps (> 0)
        families: Subset of ("airy", "bessel")
        modes: Subset of ("max", "match", "match_a6")
        restarts: Random restarts per cell
        seed: Base seed; each cell derives its own via cell_seed
        config: Solver settings

    Returns:
        ScanRows with fit_deltas populated; failed cells are None
    """
    # Check names before any solve
    unknown = [name for name in list(families) + list(modes) if name not in FAMILIES + FIT_MODES]
    if unknown:
        raise DomainError(f"unknown fit families or modes: {unknown}")
    _check_epsilons(eps_list)
    config = config or SolverConfig()
    rows = []
    for index, epsilon in enumerate(eps_list):
        eps = EpsilonParams(epsilon)
        try:
            solution = solve_converged(eps, **config.solver_kwargs())
        except BackflowError as e:
            row = _failed_row(epsilon, e)
            row.fit_deltas = {column: None for column in FIT_COLUMNS}
            rows.append(row)
            continue

        row = _row(epsilon, solution.lam)
        row.fit_deltas = {column: None for column in FIT_COLUMNS}

        # One matrix serves every family and mode at this eps
        matrix = assemble(eps, solution.grid)
        for family in families:
            # Constrained fits first; each result warm-starts the next
            warm: List[Sequence[float]] = []
            for mode in ("match_a6", "match", "max"):
                if mode not in modes:
                    continue
                try:
                    if mode == "max":
                        result = maximize_backflow(
                            family, eps, restarts, cell_seed(seed, index, family, mode),
                            matrix=matrix, warm_starts=list(warm),
                        )
                    else:
                        result = match_eigenvector(
                            family, solution, restarts, cell_seed(seed, index, family, mode),
                            a6_fixed=(mode == "match_a6"), warm_starts=list(warm),
                            matrix=matrix,
                        )
                except BackflowError as e:
                    logger.warning("eps=%g %s %s failed: %s", epsilon, family, mode, e)
                    continue
                # Latest optimum goes first
                warm.insert(0, result.params.a)
                row.fit_deltas[f"{family}_{mode}"] = result.delta
        rows.append(row)
    return rows
