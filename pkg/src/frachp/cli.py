"""Command-line front end: convergence studies, single solves, interpolation
studies, and mesh dumps, all emitting deterministic CSV."""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import approx, postproc
from .basis import DegreeRule
from .geomesh import build_geometric_mesh
from .linsolve import NotSPDError

__all__ = ["run", "main"]

CONVERGENCE_HEADER = postproc.CSV_HEADER + ",guide_uniform,guide_reduced"
INTERP_HEADER = "p,L,sigma,s,weighted_error"


class _Invalid(ValueError):
    """Validation failure carrying the offending flag name."""

    def __init__(self, flag, message):
        super().__init__(f"invalid value for {flag}: {message}")
        self.flag = flag


def _float_list(text):
    return [float(tok) for tok in text.split(",") if tok]


def _parser():
    parser = argparse.ArgumentParser(
        prog="frachp",
        description="hp-FEM solver for the 1D integral fractional Laplacian "
                    "Dirichlet problem",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, with_rule=True):
        p.add_argument("--s", type=_float_list, default=[0.5],
                       help="comma-separated fractional orders in (0,1)")
        p.add_argument("--sigma", type=float, default=0.6,
                       help="mesh grading factor in (0,1)")
        p.add_argument("--levels", type=int, default=10,
                       help="number of refinement layers L")
        if with_rule:
            p.add_argument("--rule", choices=("uniform", "reduced"),
                           default="uniform", help="degree rule (p = L)")
        p.add_argument("--quad-offset", type=int, default=6,
                       help="quadrature points per direction = p + offset")
        p.add_argument("--threads", type=int, default=None,
                       help="parallel assembly threads "
                            "(default: FRAC_HP_THREADS or 1)")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p_conv = sub.add_parser("convergence", help="run the L = 1..levels study")
    common(p_conv)

    p_solve = sub.add_parser("solve", help="solve one configuration (p = levels)")
    common(p_solve)
    p_solve.add_argument("--dump-matrix", metavar="PREFIX", default=None,
                         help="write stiffness/load as PREFIX_A.csv, PREFIX_b.csv")

    p_interp = sub.add_parser("interp-study",
                              help="weighted interpolation-error sweep")
    common(p_interp, with_rule=False)
    p_interp.add_argument("--eps-prime", type=float, default=0.05,
                          help="weight offset: beta' = 1 - s - eps_prime")

    p_mesh = sub.add_parser("mesh", help="dump mesh nodes as CSV, one per line")
    p_mesh.add_argument("--sigma", type=float, default=0.6)
    p_mesh.add_argument("--levels", type=int, default=10)
    p_mesh.add_argument("--domain", type=_float_list, default=[-1.0, 1.0],
                        help="interval endpoints a,b")
    p_mesh.add_argument("--out", default=None)

    return parser


def _validate(args):
    if hasattr(args, "sigma") and not 0.0 < args.sigma < 1.0:
        raise _Invalid("--sigma", f"{args.sigma} not in (0, 1)")
    if hasattr(args, "levels") and args.levels < 0:
        raise _Invalid("--levels", f"{args.levels} is negative")
    for s in getattr(args, "s", []):
        if not 0.0 < s < 1.0:
            raise _Invalid("--s", f"{s} not in (0, 1)")
    if getattr(args, "threads", None) is None and hasattr(args, "threads"):
        env = os.environ.get("FRAC_HP_THREADS", "1")
        try:
            args.threads = max(1, int(env))
        except ValueError:
            raise _Invalid("FRAC_HP_THREADS", f"{env!r} is not an integer")


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _fmt(v):
    return f"{v:.17g}"


def _cmd_convergence(args):
    if args.levels < 1:
        raise _Invalid("--levels", "the study needs at least one layer")
    records = postproc.convergence_study(
        args.s, args.sigma, args.levels, args.rule,
        quad_offset=args.quad_offset, threads=args.threads)
    lines = [CONVERGENCE_HEADER]
    for r in records:
        guide_u = 2.0 * args.sigma ** (r.L / 2.0) / r.L
        guide_r = 0.22 * args.sigma ** (r.L / 2.0)
        lines.append(",".join([
            _fmt(r.s), _fmt(r.sigma), str(r.L), r.degree_rule.kind, str(r.N),
            _fmt(r.energy_error), _fmt(r.discrete_energy),
            _fmt(r.wall_seconds * 1e3), _fmt(guide_u), _fmt(guide_r),
        ]))
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_solve(args):
    if len(args.s) != 1:
        raise _Invalid("--s", "solve expects a single fractional order")
    if args.levels < 1:
        raise _Invalid("--levels", "solve needs at least one layer")
    s = args.s[0]
    records = postproc.convergence_study(
        [s], args.sigma, args.levels, args.rule,
        quad_offset=args.quad_offset, threads=args.threads)[-1:]
    _write(postproc.records_to_csv(records), args.out)
    if args.dump_matrix is not None:
        rule = DegreeRule(args.rule, args.levels)
        _, _, system, _ = postproc.solve_problem(
            s, args.sigma, args.levels, rule,
            quad_offset=args.quad_offset, threads=args.threads)
        np.savetxt(args.dump_matrix + "_A.csv", system.stiffness,
                   delimiter=",", fmt="%.17g")
        np.savetxt(args.dump_matrix + "_b.csv", system.load, fmt="%.17g")
    return 0


def _cmd_interp_study(args):
    if args.levels < 1:
        raise _Invalid("--levels", "the study needs at least one layer")
    lines = [INTERP_HEADER]
    for s in args.s:
        for p, L, sigma, s_val, err in approx.interpolation_error_study(
                s, args.sigma, args.levels, args.eps_prime):
            lines.append(",".join([str(p), str(L), _fmt(sigma), _fmt(s_val),
                                   _fmt(err)]))
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_mesh(args):
    if len(args.domain) != 2:
        raise _Invalid("--domain", "expected two endpoints a,b")
    a, b = args.domain
    if not a < b:
        raise _Invalid("--domain", f"({a}, {b}) is empty or reversed")
    mesh = build_geometric_mesh((a, b), args.sigma, args.levels)
    _write("\n".join(_fmt(x) for x in mesh.nodes) + "\n", args.out)
    return 0


_COMMANDS = {
    "convergence": _cmd_convergence,
    "solve": _cmd_solve,
    "interp-study": _cmd_interp_study,
    "mesh": _cmd_mesh,
}


def run(argv=None):
    """Parse arguments and execute; returns the process exit code.

    0 on success, 2 on validation errors, 3 on numerical failures.
    """
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        _validate(args)
        return _COMMANDS[args.subcommand](args)
    except _Invalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotSPDError, RuntimeError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
