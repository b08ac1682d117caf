"""Command-line entry point: ``alphapoisson <command> [options]``.

Exit codes: 0 pass, 1 verdict fail, 2 configuration error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import AccuracyError, ConfigError, DivergenceError, DomainError, NonConvergence
from .experiments import (
    DEFAULT_GRADIENT_LADDER,
    DEFAULT_HEINZ_LADDER,
    DEFAULT_HL_LADDER,
    cmd_gradient_bound,
    cmd_hardy_littlewood,
    cmd_heinz,
    cmd_kalaj,
    cmd_residual,
)
from .maps import MAP_NAMES
from .selftest import run_selftest
from .solver import perturbed_kernel_constant

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _ladder(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated radii, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="dimension of the ball (default 2)")
    common.add_argument("--alpha", type=float, default=1.0, help="weight exponent (default 1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--nodes", type=int, default=None, help="base node count")
    common.add_argument("--out", type=Path, default=None, help="write the CSV report here")
    common.add_argument("--csv", action="store_true", help="print CSV instead of a table")

    p = argparse.ArgumentParser(prog="alphapoisson", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("selftest", parents=[common], help="quick invariant checks")
    s.add_argument("--perturb-c-alpha", type=float, default=0.0, help=argparse.SUPPRESS)

    h = sub.add_parser("heinz", parents=[common], help="boundary difference quotients")
    h.add_argument("--phi", default="identity", choices=MAP_NAMES)
    h.add_argument("--r-ladder", type=_ladder, default=DEFAULT_HEINZ_LADDER)
    h.add_argument("--zetas", type=int, default=8)
    h.add_argument("--policy", default="graded", choices=("graded", "linear", "fixed"))

    k = sub.add_parser("kalaj", parents=[common], help="sharp harmonic constant")
    k.add_argument("--max-n", type=int, default=None, help="tabulate n .. max-n")

    hl = sub.add_parser("hl", parents=[common], help="interior/boundary seminorm ladder")
    hl.add_argument("--beta", type=float, default=0.5)
    hl.add_argument("--pairs", type=int, default=4000)
    hl.add_argument("--phi", default="holder", choices=MAP_NAMES)
    hl.add_argument("--r-ladder", type=_ladder, default=DEFAULT_HL_LADDER)

    g = sub.add_parser("gradbound", parents=[common], help="scaled gradient ladder")
    g.add_argument("--beta", type=float, default=0.5)
    g.add_argument("--phi", default="holder", choices=MAP_NAMES)
    g.add_argument("--r-ladder", type=_ladder, default=DEFAULT_GRADIENT_LADDER)
    g.add_argument("--directions", type=int, default=64)

    r = sub.add_parser("residual", parents=[common], help="operator residual of the solver")
    r.add_argument("--phi", default="one", choices=MAP_NAMES)
    r.add_argument("--grid-radius", type=float, default=0.8)
    r.add_argument("--grid-count", type=int, default=25)
    r.add_argument("--h", type=float, default=1e-3)
    r.add_argument("--policy", default="graded", choices=("graded", "linear", "fixed"))
    return p


def _run(args):
    nodes = {} if args.nodes is None else {"base_nodes": args.nodes}
    if args.command == "selftest":
        with perturbed_kernel_constant(args.perturb_c_alpha):
            return run_selftest()
    if args.command == "heinz":
        return cmd_heinz(args.n, args.alpha, args.phi, args.r_ladder, args.zetas, args.seed,
                         node_growth=args.policy, **nodes)
    if args.command == "kalaj":
        top = args.n if args.max_n is None else args.max_n
        return cmd_kalaj(range(args.n, top + 1))
    if args.command == "hl":
        return cmd_hardy_littlewood(args.n, args.alpha, args.beta, args.pairs, args.r_ladder,
                                    args.seed, phi_name=args.phi, **nodes)
    if args.command == "gradbound":
        return cmd_gradient_bound(args.n, args.alpha, args.beta, args.r_ladder, args.seed,
                                  phi_name=args.phi, directions=args.directions, **nodes)
    if args.command == "residual":
        return cmd_residual(args.n, args.alpha, args.phi, args.grid_radius, args.grid_count,
                            args.h, node_growth=args.policy, **nodes)
    raise ConfigError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = _run(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonConvergence, DivergenceError, AccuracyError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = report.to_csv()
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    print(text if args.csv else report.to_text(), end="\n" if not args.csv else "")
    if report.verdict is None:
        return EXIT_PASS
    return EXIT_PASS if report.verdict else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
