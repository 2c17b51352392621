"""Batch experiment runner emitting CSV error records.

Subcommands mirror the coning studies: `reconstruct` (per-window error
curves for one method), `compare` (all methods over a horizon),
`noise-run` (seeded sensor errors plus per-window error bounds) and
`sweep-convergence` (empirical divergence boundary vs sample count).

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import harness
from .fitting import SingularFitError
from .iteration import DegreeBudgetError, ITERATIVE_METHODS
from .kinematics import DegenerateRotationError
from .scenarios import ConingScenario, PropagationError

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

SWEEP_N_VALUES = tuple(range(2, 11))


def _bias_vector(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("bias needs three comma-separated values")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_scenario_flags(p: argparse.ArgumentParser):
    p.add_argument("--alpha-deg", type=float, default=10.0,
                   help="coning half-angle, deg")
    p.add_argument("--coning-freq-pi", type=float, default=0.74,
                   help="coning frequency in multiples of pi rad/s")
    p.add_argument("--rate-hz", type=float, default=100.0,
                   help="gyro sampling rate")
    p.add_argument("--samples", type=int, default=8, metavar="N",
                   help="samples per reconstruction window")
    p.add_argument("--order", type=int, default=None, metavar="n",
                   help="fit order (default N-1)")
    p.add_argument("--iterations", type=int, default=7, metavar="j")
    p.add_argument("--method", default="rodfiter",
                   choices=list(ITERATIVE_METHODS) + [harness.METHOD_MAINSTREAM])
    p.add_argument("--sample-kind", default="increment",
                   choices=["velocity", "increment"])
    p.add_argument("--horizon-s", type=float, default=0.5)
    p.add_argument("--bias-deg-h", type=_bias_vector, default=np.zeros(3),
                   metavar="x,y,z", help="gyro bias, deg/h")
    p.add_argument("--arw-deg-sqrt-h", type=float, default=0.0,
                   help="angle random walk, deg/sqrt(h)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--truncate-degree", type=int, default=None)
    p.add_argument("--out", required=True, metavar="FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rodfiter",
        description="Coning-motion attitude reconstruction benchmarks",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in ("reconstruct", "compare", "noise-run", "sweep-convergence"):
        p = sub.add_parser(name)
        _add_scenario_flags(p)
        if name == "sweep-convergence":
            # increments of a fast cone alias down and hide the boundary
            p.set_defaults(sample_kind="velocity")
    return parser


def _scenario(args) -> ConingScenario:
    n = args.order if args.order is not None else args.samples - 1
    if args.rate_hz <= 0.0:
        raise ValueError("sampling rate must be positive")
    return ConingScenario.from_sensor_spec(
        alpha=math.radians(args.alpha_deg),
        Omega=args.coning_freq_pi * math.pi,
        T=1.0 / args.rate_hz,
        N=args.samples,
        n=n,
        bias_deg_h=args.bias_deg_h,
        arw_deg_sqrt_h=args.arw_deg_sqrt_h,
        seed=args.seed,
    )


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_csv(path: str, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _dispatch(args) -> tuple[tuple, list]:
    if args.subcommand == "sweep-convergence":
        rows = harness.run_sweep_convergence(
            T=1.0 / args.rate_hz,
            n_values=SWEEP_N_VALUES,
            iterations=args.iterations,
            alpha=math.radians(args.alpha_deg),
            sample_kind=args.sample_kind,
        )
        return harness.SWEEP_HEADER, rows

    sc = _scenario(args)
    if args.subcommand == "reconstruct":
        rows = harness.run_reconstruct(
            sc, args.method, args.iterations, args.sample_kind,
            args.horizon_s, truncate_degree=args.truncate_degree,
        )
    elif args.subcommand == "compare":
        rows = harness.run_compare(
            sc, args.iterations, args.sample_kind, args.horizon_s,
            truncate_degree=args.truncate_degree,
        )
    else:  # noise-run
        rows = harness.run_noise(
            sc, args.method, args.iterations, args.sample_kind,
            args.horizon_s, truncate_degree=args.truncate_degree,
        )
    return harness.ERROR_HEADER, rows


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        header, rows = _dispatch(args)
    except (SingularFitError, DegreeBudgetError, PropagationError,
            DegenerateRotationError, FloatingPointError, RuntimeError) as exc:
        print(f"rodfiter: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"rodfiter: invalid run specification: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    write_csv(args.out, header, rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
