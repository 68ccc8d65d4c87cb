"""
Command-line interface for the relbackflow package.
"""

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from .config import RunConfig
from .core import BackflowStudy
from .current import count_sign_changes
from .eigensolver import METHODS, EigenSolution
from .exceptions import BackflowError, ConvergenceError, DomainError, FitError, RefinementError
from .fitting import MODES, TrialParams
from .scan import FAMILIES, scan_header
from .utils import (
    diagnostic_path,
    get_default_output_path,
    parse_float_list,
    validate_epsilon,
    validate_epsilons,
    validate_grid,
    validate_n_tau,
    validate_params,
    validate_tau_range,
)
from .writers import ResultWriter

COMMANDS = ("eigen", "eigen-nonrel", "scan", "current", "fit", "formula")

# Flags whose values may start with a minus sign.
NEGATIVE_VALUE_FLAGS = ("--params", "--epsilons", "--tau-range")

# Errors reported with exit status 1 and a diagnostic artifact.
SOLVER_FAILURES = (ConvergenceError, RefinementError, FitError)


def _number(kind: Callable[[str], Any], text: str) -> Any:
    try:
        return kind(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number: {text!r}") from None


def positive_float(text: str) -> float:
    """argparse type for values > 0."""
    value = _number(float, text)
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return value


def non_negative_float(text: str) -> float:
    """argparse type for values >= 0."""
    value = _number(float, text)
    if not value >= 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"must be a non-negative number, got {text}")
    return value


def non_negative_int(text: str) -> int:
    """argparse type for integers >= 0."""
    value = _number(int, text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def positive_int(text: str) -> int:
    """argparse type for integers >= 1."""
    value = _number(int, text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def count_at_least_two(text: str) -> int:
    """argparse type for node, level and sample counts."""
    value = _number(int, text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"must be >= 2, got {text}")
    return value


def float_list(text: str) -> List[float]:
    """argparse type for comma-separated floats."""
    try:
        return list(parse_float_list(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number list: {text!r}") from None


def tau_window(text: str) -> List[float]:
    """argparse type for a time window tau_min,tau_max."""
    values = float_list(text)
    valid, message = validate_tau_range(values)
    if not valid:
        raise argparse.ArgumentTypeError(message)
    return values


def _attach_negative_values(args: List[str]) -> List[str]:
    """Rewrite '--params -1.2,...' as '--params=-1.2,...' so argparse keeps the value."""
    joined = []
    index = 0
    while index < len(args):
        arg = args[index]
        following = args[index + 1] if index + 1 < len(args) else ""
        if (
            arg in NEGATIVE_VALUE_FLAGS
            and len(following) > 1
            and following[0] == "-"
            and (following[1].isdigit() or following[1] == ".")
        ):
            joined.append(f"{arg}={following}")
            index += 2
            continue
        joined.append(arg)
        index += 1
    return joined


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument(
        "--config",
        help="JSON run configuration; explicit flags override its values",
    )
    common.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Enable debug logging",
    )
    return common


def _add_solver_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("solver options")
    group.add_argument("--q0", type=positive_float, help="Base momentum cutoff (default: 6.0)")
    group.add_argument("--n0", type=count_at_least_two, help="Base node count (default: 200)")
    group.add_argument(
        "--eig-tol", dest="eig_tol", type=positive_float,
        help="Eigen residual tolerance (default: 1e-8)",
    )
    group.add_argument(
        "--refine-tol", dest="refine_tol", type=positive_float,
        help="Tolerance between refinement levels (default: 5e-5)",
    )
    group.add_argument(
        "--h-max", dest="h_max", type=count_at_least_two,
        help="Largest refinement level (default: 16)",
    )
    group.add_argument(
        "--max-iter", dest="max_iter", type=positive_int,
        help="Power-iteration budget per level (default: 200000)",
    )
    group.add_argument(
        "--method", choices=METHODS,
        help="Eigen method: shifted power iteration or dense LAPACK (default: power)",
    )


def _add_fit_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--restarts", type=positive_int, help="Random restarts per fit (default: 200)"
    )
    parser.add_argument("--seed", type=non_negative_int, help="Restart seed (default: 0)")


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser.

    Every option defaults to SUPPRESS so the parsed namespace holds only
    the flags given explicitly.

    Returns:
        Configured parser
    """
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="relbackflow",
        description="Relativistic quantum backflow: eigenvalues, currents and trial fits",
        parents=[common],
    )
    subparsers = parser.add_subparsers(dest="command", metavar="command")

    eigen = subparsers.add_parser(
        "eigen", parents=[common], argument_default=argparse.SUPPRESS,
        help="Solve for the maximal backflow at one eps",
    )
    eigen.add_argument("--epsilon", type=positive_float, help="Relativity parameter (> 0)")
    eigen.add_argument("-o", "--out", help="Output JSON path (default: ./eigen_eps<eps>.json)")
    eigen.add_argument(
        "--dump-matrix", dest="dump_matrix", help="Also write the final kernel matrix as CSV"
    )
    _add_solver_options(eigen)

    nonrel = subparsers.add_parser(
        "eigen-nonrel", parents=[common], argument_default=argparse.SUPPRESS,
        help="Solve the non-relativistic problem (backflow constant)",
    )
    nonrel.add_argument("-o", "--out", help="Output JSON path (default: ./eigen_nonrel.json)")
    _add_solver_options(nonrel)

    scan = subparsers.add_parser(
        "scan", parents=[common], argument_default=argparse.SUPPRESS,
        help="Eigenvalue and closed-form model over a list of eps",
    )
    scan.add_argument(
        "--epsilons", type=float_list,
        help="Comma-separated eps values (default: 0.1,0.2,...,2.5)",
    )
    scan.add_argument(
        "--with-fits", dest="with_fits", action="store_true",
        help="Add trial-fit columns",
    )
    scan.add_argument(
        "--families", nargs="+", choices=FAMILIES,
        help="Trial families for --with-fits (default: airy bessel)",
    )
    scan.add_argument("-o", "--out", help="Output CSV path (default: ./scan.csv)")
    _add_fit_options(scan)
    _add_solver_options(scan)

    current = subparsers.add_parser(
        "current", parents=[common], argument_default=argparse.SUPPRESS,
        help="Current at the origin over one period",
    )
    current.add_argument("--epsilon", type=positive_float, help="Relativity parameter (> 0)")
    current.add_argument(
        "--trial", choices=FAMILIES, help="Use a trial wavefunction instead of the eigenvector"
    )
    current.add_argument(
        "--params", type=float_list, help="Trial coefficients a1,...,a6 for --trial"
    )
    current.add_argument(
        "--n-tau", dest="n_tau", type=count_at_least_two,
        help="Time samples (default: max(4001, ceil(40/eps^2)))",
    )
    current.add_argument(
        "--tau-range", dest="tau_range", type=tau_window,
        help="Sampled time window tau_min,tau_max (default: 0,1); the flux stays over [0, 1]",
    )
    current.add_argument("-o", "--out", help="Output CSV path (default: ./current_eps<eps>.csv)")
    _add_solver_options(current)

    fit = subparsers.add_parser(
        "fit", parents=[common], argument_default=argparse.SUPPRESS,
        help="Fit an Airy or Bessel trial wavefunction",
    )
    fit.add_argument("--family", choices=FAMILIES, help="Trial family (default: bessel)")
    fit.add_argument("--mode", choices=MODES, help="Fit objective (default: maximize)")
    fit.add_argument("--epsilon", type=positive_float, help="Relativity parameter (> 0)")
    fit.add_argument(
        "--fix-a6", dest="a6_fixed", action="store_true", help="Hold a6 at 2/3"
    )
    fit.add_argument(
        "--unweighted", dest="weighted", action="store_false",
        help="Plain instead of quadrature-weighted least squares in match mode",
    )
    fit.add_argument(
        "--verbose-trace", dest="verbose_trace", action="store_true",
        help="Include the best-so-far trace over restarts in the output",
    )
    fit.add_argument("-o", "--out", help="Output JSON path (default: ./fit_eps<eps>.json)")
    _add_fit_options(fit)
    _add_solver_options(fit)

    formula = subparsers.add_parser(
        "formula", parents=[common], argument_default=argparse.SUPPRESS,
        help="Print the closed-form backflow model at eps",
    )
    formula.add_argument(
        "--epsilon", type=non_negative_float, help="Relativity parameter (>= 0)"
    )

    return parser


def parse_args(args: List[str] = None) -> argparse.Namespace:
    """
    Parse command-line arguments.

    Args:
        args: Command-line arguments (if None, use sys.argv)

    Returns:
        Parsed arguments
    """
    parser = build_parser()
    if args is None:
        args = sys.argv[1:]
    if not args:
        return parser.parse_args(["-h"])
    namespace = parser.parse_args(_attach_negative_values(list(args)))
    if namespace.command is None:
        parser.error(f"a command is required: one of {', '.join(COMMANDS)}")
    return namespace


def load_run_config(namespace: argparse.Namespace) -> RunConfig:
    """
    Merge defaults, the --config file and explicit flags.

    Args:
        namespace: Parsed arguments

    Returns:
        RunConfig

    Raises:
        DomainError: For unknown keys in the config file
        OSError: If the config file cannot be read
    """
    # Only flags given on the command line override the file
    explicit: Dict[str, Any] = {
        key: value for key, value in vars(namespace).items() if key not in ("command", "config")
    }
    config_path = getattr(namespace, "config", None)
    base = RunConfig.load(config_path) if config_path else RunConfig()
    return base.merged(explicit)


def validate_run_config(command: str, config: RunConfig) -> Optional[str]:
    """
    Check the merged configuration for a command.

    Args:
        command: CLI command name
        config: Merged configuration

    Returns:
        Error message, or None when the configuration is usable
    """
    checks = []
    if command != "formula":
        checks.append(validate_grid(config.q0, config.n0, config.h_max))
    if command in ("eigen", "current", "fit"):
        checks.append(validate_epsilon(config.epsilon))
    if command == "formula":
        checks.append(validate_epsilon(config.epsilon, allow_zero=True))
    if command == "scan":
        checks.append(validate_epsilons(config.epsilons))
    if command == "current":
        checks.append(validate_n_tau(config.n_tau))
        checks.append(validate_tau_range(config.tau_range))
        if config.trial is not None:
            checks.append(validate_params(config.params))
    for valid, message in checks:
        if not valid:
            return message
    return None


def main(args: List[str] = None) -> int:
    """
    Main entry point for the command-line interface.

    Args:
        args: Command-line arguments (if None, use sys.argv)

    Returns:
        Exit code (0 for success, 1 for a solver or fit failure, 2 for a usage error)
    """
    # Layer defaults, config file and flags
    parsed_args = parse_args(args)
    try:
        config = load_run_config(parsed_args)
    except (OSError, ValueError, TypeError) as e:
        print(f"Error: Could not load configuration: {e}")
        return 2

    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    # Validate settings before any solve
    message = validate_run_config(parsed_args.command, config)
    if message:
        print(f"Error: {message}")
        return 2

    handlers = {
        "eigen": run_eigen,
        "eigen-nonrel": run_eigen_nonrel,
        "scan": run_scan,
        "current": run_current,
        "fit": run_fit,
        "formula": run_formula,
    }
    study = BackflowStudy(config.solver())
    try:
        return handlers[parsed_args.command](study, config)
    except DomainError as e:
        print(f"Error: {e}")
        return 2


def report_failure(error: BackflowError, output_path: str) -> int:
    """
    Print a solver or fit failure and write its diagnostics next to the artifact.

    Args:
        error: The raised error
        output_path: Path the artifact would have been written to

    Returns:
        Exit code 1
    """
    print(f"Error: {error}")
    path = diagnostic_path(output_path)
    if ResultWriter.write_json(error.diagnostics(), path):
        print(f"Diagnostics written to: {path}")
    return 1


def _print_solution(solution: EigenSolution) -> None:
    print(f"epsilon = {solution.eps.epsilon:g}")
    print(f"lambda  = {solution.lam:.8f} (grid {solution.lam_grid:.8f})")
    print(
        f"converged at h = {solution.h_final} ({solution.grid.size} nodes, "
        f"cutoff {solution.grid.upper:.3f}), residual {solution.residual:.2e}"
    )


def _write_solution(solution: EigenSolution, output_path: str) -> int:
    if not ResultWriter.write_json(solution.to_dict(), output_path):
        print(f"Error: Could not write {output_path}")
        return 1
    _print_solution(solution)
    print(f"Eigen solution written to: {output_path}")
    return 0


def run_eigen(study: BackflowStudy, config: RunConfig) -> int:
    """
    Solve at one eps and write the EigenSolution JSON.

    Args:
        study: BackflowStudy object
        config: Merged configuration

    Returns:
        Exit code (0 for success, non-zero for failure)
    """
    output_path = config.out or get_default_output_path("eigen", config.epsilon)
    try:
        solution = study.solve(config.epsilon)
    except SOLVER_FAILURES as e:
        return report_failure(e, output_path)

    status = _write_solution(solution, output_path)

    # Optional matrix dump on the converged grid
    if status == 0 and config.dump_matrix:
        if not study.matrix(config.epsilon).to_csv(config.dump_matrix):
            print(f"Error: Could not write {config.dump_matrix}")
            return 1
        print(f"Kernel matrix written to: {config.dump_matrix}")
    return status


def run_eigen_nonrel(study: BackflowStudy, config: RunConfig) -> int:
    """
    Solve the non-relativistic problem and write the EigenSolution JSON.

    Args:
        study: BackflowStudy object
        config: Merged configuration

    Returns:
        Exit code (0 for success, non-zero for failure)
    """
    output_path = config.out or get_default_output_path("eigen-nonrel")
    try:
        solution = study.solve_nonrel()
    except SOLVER_FAILURES as e:
        return report_failure(e, output_path)
    return _write_solution(solution, output_path)


def run_scan(study: BackflowStudy, config: RunConfig) -> int:
    """
    Scan eps and write the CSV table.

    Rows whose solve failed are still written, with lambda = nan.

    Args:
        study: BackflowStudy object
        config: Merged configuration

    Returns:
        Exit code (0 for success, 1 if any row failed)
    """
    output_path = config.out or get_default_output_path("scan")
    rows = study.scan(
        config.epsilons,
        with_fits=config.with_fits,
        families=config.families,
        restarts=config.restarts,
        seed=config.seed,
    )
    # Failed rows are kept in the table
    header = scan_header(config.with_fits)
    if not ResultWriter.write_csv(header, [row.values(config.with_fits) for row in rows], output_path):
        print(f"Error: Could not write {output_path}")
        return 1

    for row in rows:
        print(
            f"eps={row.epsilon:<5g} lambda={row.lam:.6f} model={row.model:.6f} "
            f"rel_err={row.rel_err:.4f}"
        )
    print(f"Scan written to: {output_path}")

    # Collect failures for the diagnostic file
    failures = [{"epsilon": row.epsilon, "error": row.error} for row in rows if row.error]
    if failures:
        print(f"Error: {len(failures)} of {len(rows)} eps values failed")
        path = diagnostic_path(output_path)
        if ResultWriter.write_json({"error": "scan rows failed", "failures": failures}, path):
            print(f"Diagnostics written to: {path}")
        return 1
    return 0


def run_current(study: BackflowStudy, config: RunConfig) -> int:
    """
    Reconstruct the current at the origin and write it as CSV.

    Args:
        study: BackflowStudy object
        config: Merged configuration

    Returns:
        Exit code (0 for success, non-zero for failure)
    """
    output_path = config.out or get_default_output_path("current", config.epsilon)

    # Trial wavefunction replaces the eigenvector when requested
    trial = None
    if config.trial is not None:
        trial = TrialParams(family=config.trial, a=tuple(config.params))
    try:
        trace = study.current(
            config.epsilon,
            n_tau=config.n_tau,
            trial=trial,
            tau_range=(config.tau_range[0], config.tau_range[1]),
        )
    except SOLVER_FAILURES as e:
        return report_failure(e, output_path)

    # Write the sampled trace
    if not ResultWriter.write_csv(("tau", "J"), trace.rows(), output_path):
        print(f"Error: Could not write {output_path}")
        return 1

    # Summary against the cached eigen solution
    solution = study.solve(config.epsilon)
    print(
        f"epsilon = {config.epsilon:g}, {trace.taus.size} time samples over "
        f"[{trace.taus[0]:g}, {trace.taus[-1]:g}]"
    )
    print(f"flux over [0,1] = {trace.delta:.8f}")
    print(f"eigenvalue      = {solution.lam:.8f} (grid {solution.lam_grid:.8f})")
    if trial is None:
        print(f"|flux - lambda| = {abs(trace.delta - solution.lam_grid):.2e} on the grid")
    print(f"sign changes    = {count_sign_changes(trace)}")
    print(f"Current written to: {output_path}")
    return 0


def run_fit(study: BackflowStudy, config: RunConfig) -> int:
    """
    Run a trial-fit campaign and write the FitResult JSON.

    Args:
        study: BackflowStudy object
        config: Merged configuration

    Returns:
        Exit code (0 for success, non-zero for failure)
    """
    output_path = config.out or get_default_output_path("fit", config.epsilon)
    try:
        result = study.fit(
            config.family,
            config.epsilon,
            mode=config.mode,
            restarts=config.restarts,
            seed=config.seed,
            a6_fixed=config.a6_fixed,
            weighted=config.weighted,
        )
    except SOLVER_FAILURES as e:
        return report_failure(e, output_path)

    if not ResultWriter.write_json(result.to_dict(config.verbose_trace), output_path):
        print(f"Error: Could not write {output_path}")
        return 1

    # Trial fluxes live on the same truncated grid as lam_grid
    lam = study.solve(config.epsilon).lam_grid
    print(f"{result.params.family.value} {result.mode} at eps={config.epsilon:g}")
    print(f"params = {', '.join(f'{value:.6f}' for value in result.params.a)}")
    print(f"delta  = {result.delta:.8f} ({abs(result.delta / lam):.2%} of lambda = {lam:.8f})")
    if result.residual is not None:
        print(f"residual = {result.residual:.3e}")
    print(f"Fit written to: {output_path}")
    return 0


def run_formula(study: BackflowStudy, config: RunConfig) -> int:
    """
    Print the closed-form backflow magnitude.

    Args:
        study: BackflowStudy object
        config: Merged configuration

    Returns:
        Exit code 0
    """
    print(f"{study.formula(config.epsilon):.10f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
