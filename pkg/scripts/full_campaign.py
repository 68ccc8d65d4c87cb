#!/usr/bin/env python3
"""
Full trial-fit campaign over the default eps grid.

Runs every family and fit mode with 5000 random restarts per cell and
writes the scan table with fit columns. Expect several hours of compute;
this is not part of the test suite.

Usage:
    python scripts/full_campaign.py --out results/full_campaign.csv
"""

import argparse
import logging
import sys

from relbackflow.config import SolverConfig
from relbackflow.fitting import DEFAULT_RESTARTS
from relbackflow.scan import DEFAULT_EPSILONS, FAMILIES, FIT_MODES, fit_scan, scan_header
from relbackflow.utils import parse_float_list
from relbackflow.writers import ResultWriter


def main() -> int:
    parser = argparse.ArgumentParser(description="Run the full trial-fit campaign")
    parser.add_argument("--out", default="full_campaign.csv", help="Output CSV path")
    parser.add_argument(
        "--epsilons",
        default=",".join(f"{e:g}" for e in DEFAULT_EPSILONS),
        help="Comma-separated eps values (default: 0.1,...,2.5)",
    )
    parser.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s: %(message)s")

    rows = fit_scan(
        list(parse_float_list(args.epsilons)),
        FAMILIES,
        FIT_MODES,
        restarts=args.restarts,
        seed=args.seed,
        config=SolverConfig(),
    )
    if not ResultWriter.write_csv(
        scan_header(True), [row.values(True) for row in rows], args.out
    ):
        print(f"Error: Could not write {args.out}")
        return 1
    print(f"Campaign written to: {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
