"""Command-line front end.

Examples::

    bangle --norm linf classify "1,0" "1,1"
    bangle --norm linf compare-base "1,0" "1,0.3" "1,0.8"
    bangle --norm l1 sweep "1,0" -3.14159 3.14159 1000
    bangle verify --trials 500 --seed 42

Exit status: 0 ok, 1 property failure, 2 usage or parse error, 3 domain
precondition (zero vector, numerically unresolvable pair).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

import numpy as np

from . import geometry, suite
from .exceptions import BirkhoffError, ConvergenceError, DimensionError, NormSpecError, ZeroVectorError
from .norms import format_norm_spec, parse_norm_spec
from .profile import DEFAULT_TOL

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

_NEGATIVE_ARG = re.compile(r"^-(\d|\.\d)")


class UsageError(Exception):
    pass


def parse_vector(text: str) -> np.ndarray:
    """Parse ``"1,0.5,-2"`` into a float vector."""
    parts = [p.strip() for p in text.strip().split(",")]
    try:
        v = np.array([float(p) for p in parts])
    except ValueError:
        raise UsageError(f"cannot parse vector {text.strip()!r}; expected comma-separated numbers") from None
    if not np.all(np.isfinite(v)):
        raise UsageError(f"vector {text.strip()!r} has non-finite entries")
    return v


def fmt_float(v: float) -> str:
    return format(float(v), ".17g")


def to_json(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    return json.dumps(obj)


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(rows[0]))
    for row in rows:
        writer.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in row.values()])
    return buf.getvalue()


def _human(row: dict) -> str:
    return " ".join(f"{k}={fmt_float(v) if isinstance(v, float) else v}" for k, v in row.items())


def emit(rows: list[dict], fmt: str, out, single: bool = True) -> None:
    if fmt == "csv":
        out.write(to_csv(rows))
    elif fmt == "human":
        out.write("\n".join(_human(r) for r in rows) + "\n")
    else:
        out.write(to_json(rows[0] if single else rows) + "\n")


def _vectors(spec, *texts):
    vs = [parse_vector(t) for t in texts]
    if len({len(v) for v in vs}) != 1:
        raise DimensionError("vectors have different dimensions: " + ", ".join(str(len(v)) for v in vs))
    spec.check_dim(len(vs[0]))
    return vs


def cmd_classify(args, spec, out) -> int:
    x, y = _vectors(spec, args.x, args.y)
    rep = geometry.angle_report(spec, x, y, tol=args.tol)
    emit([{"norm": format_norm_spec(spec), **rep.as_dict()}], args.format or "json", out)
    return EXIT_OK


def cmd_gamma(args, spec, out) -> int:
    x, y = _vectors(spec, args.x, args.y)
    rep = _nonzero_report(spec, x, y, args.tol)
    row = {"class": rep.angle_class.value, "gamma": rep.gamma, "gamma_star": rep.gamma_star}
    emit([row], args.format or "json", out)
    return EXIT_OK


def cmd_cosine(args, spec, out) -> int:
    x, y = _vectors(spec, args.x, args.y)
    rep = _nonzero_report(spec, x, y, args.tol)
    row = {"class": rep.angle_class.value, "k": rep.k, "gamma_hat": rep.gamma_hat}
    emit([row], args.format or "json", out)
    return EXIT_OK


def _nonzero_report(spec, x, y, tol):
    if spec(x) == 0 or spec(y) == 0:
        raise ZeroVectorError("x and y must be nonzero")
    return geometry.angle_report(spec, x, y, tol=tol)


def cmd_angles(args, spec, out) -> int:
    x, y = _vectors(spec, args.x, args.y)
    row = {
        "pythagorean": geometry.pythagorean_angle(spec, x, y),
        "isosceles": geometry.isosceles_angle(spec, x, y),
    }
    emit([row], args.format or "json", out)
    return EXIT_OK


def cmd_compare(args, spec, out) -> int:
    a, b, c = _vectors(spec, args.first, args.second, args.third)
    if args.command == "compare-base":
        res = geometry.compare_same_base(spec, a, b, c, tie_tol=args.tie_tol, tol=args.tol)
    else:
        res = geometry.compare_same_target(spec, a, b, c, tie_tol=args.tie_tol, tol=args.tol)
    emit([res.as_dict()], args.format or "json", out)
    return EXIT_OK


def cmd_sweep(args, spec, out) -> int:
    (x,) = _vectors(spec, args.x)
    if len(x) != 2:
        raise DimensionError(f"sweep needs a vector in R^2, got dimension {len(x)}")
    if args.steps < 2:
        raise UsageError("steps must be at least 2")
    thetas = np.linspace(args.theta_min, args.theta_max, args.steps)
    rows = [
        {"theta": r.theta, "k": r.k, "class": r.angle_class.value, "gamma_hat": r.gamma_hat}
        for r in geometry.sweep_k(spec, x, thetas, tol=args.tol)
    ]
    emit(rows, args.format or "csv", out, single=False)
    return EXIT_OK


def cmd_verify(args, spec, out) -> int:
    if args.trials < 1:
        raise UsageError("trials must be at least 1")
    families = suite.family_for_spec(spec) if args.norm_given else None
    report = suite.run_suite(args.trials, seed=args.seed, families=families, include_bad_norm=args.inject_bad_norm)
    fmt = args.format or "json"
    if fmt == "json":
        out.write(to_json(report.as_dict()) + "\n")
    else:
        rows = [
            {"property": t.name, "passed": t.passed, "failed": t.failed, "not_applicable": t.not_applicable}
            for t in report.tallies.values()
        ]
        emit(rows, fmt, out, single=False)
    return EXIT_OK if report.all_passed else EXIT_PROPERTY


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--norm", default=default(None), help="norm spec: l1 | l2 | linf | lp:<p> | wlp:<p>:[w,...] | ip:[[...],...] (default l2)")
    p.add_argument("--tol", type=float, default=default(DEFAULT_TOL), help="solver tolerance relative to ||x||/||y||")
    p.add_argument("--tie-tol", type=float, default=default(geometry.DEFAULT_TIE_TOL), help="band within which two angles compare Same")
    p.add_argument("--format", choices=("json", "csv", "human"), default=default(None))
    p.add_argument("--seed", type=int, default=default(0), help="seed for verify (64-bit)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bangle", description="Birkhoff angles in finite-dimensional normed spaces")
    _global_options(p, suppress=False)
    # the same flags are accepted after the subcommand as well
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (
        ("classify", cmd_classify, "full angle report for the B-angle from x to y"),
        ("gamma", cmd_gamma, "gamma and gamma* for the pair"),
        ("cosine", cmd_cosine, "the cosine analog k(x, y)"),
        ("angles", cmd_angles, "Pythagorean and isosceles angles between x and y"),
    ):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.add_argument("x")
        sp.add_argument("y")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("compare-base", help="compare x->y1 against x->y2", parents=[common])
    for a in ("first", "second", "third"):
        sp.add_argument(a, metavar={"first": "x", "second": "y1", "third": "y2"}[a])
    sp.set_defaults(func=cmd_compare)
    sp = sub.add_parser("compare-target", help="compare x1->y against x2->y", parents=[common])
    for a in ("first", "second", "third"):
        sp.add_argument(a, metavar={"first": "x1", "second": "x2", "third": "y"}[a])
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("sweep", help="k(x, (cos t, sin t)) over an evenly spaced t grid in (-pi, pi]", parents=[common])
    sp.add_argument("x")
    sp.add_argument("theta_min", type=float)
    sp.add_argument("theta_max", type=float)
    sp.add_argument("steps", type=int)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run the seeded property suite", parents=[common])
    sp.add_argument("--trials", type=int, default=100, help="random cases per norm family")
    sp.add_argument("--inject-bad-norm", action="store_true", help="add a non-convex test double (must fail)")
    sp.set_defaults(func=cmd_verify)
    return p


def _protect_negatives(argv):
    # argparse takes "-1,0" for an option; a leading space keeps it positional
    return [" " + a if _NEGATIVE_ARG.match(a) else a for a in argv]


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_protect_negatives(argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    args.norm_given = args.norm is not None
    try:
        spec = parse_norm_spec(args.norm or "l2")
        if not args.tol > 0 or not args.tie_tol >= 0:
            raise UsageError("--tol must be positive and --tie-tol non-negative")
        return args.func(args, spec, out)
    except (UsageError, NormSpecError, DimensionError) as exc:
        print(f"bangle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ZeroVectorError, ConvergenceError) as exc:
        print(f"bangle: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (BirkhoffError, ValueError) as exc:
        print(f"bangle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
