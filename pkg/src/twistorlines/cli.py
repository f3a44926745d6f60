"""Command-line front end: evaluate, solve, act, take limits, verify.

Complex values are written ``a+bi``, ``a-bi``, ``a``, ``bi`` or ``inf``
with no spaces.  Values starting with ``-`` and containing a second sign
must be attached with ``=``, e.g. ``--x=-2-1i``.

Exit codes: 0 ok, 1 verification failed, 2 usage error, 3 domain
rejection (on-diagonal point, excluded fiber, reducible parameter),
4 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import re
import sys

from .curves import LineParams, SpacePoint, eval_line, limit_curve, trajectory_rows, write_trajectory_csv
from .errors import NumericalFailureError, TwistorError
from .incidence import FiberZeroPoint, fiber_zero_point, jacobian_with_chart, solve_fiber_zero, solve_line_through
from .sphere import ChordalTolerance, SpherePoint
from .symmetry import GroupElement, act_on_params
from .verifier import VerificationPlan, resolve_suites, verify_all

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2, 3, 4

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:e[+-]?\d+)?"
_REAL = re.compile(rf"^[+-]?{_NUM}$")
_IMAG = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")
_BOTH = re.compile(rf"^(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?)i$")


def _coef(text):
    return float(text + "1") if text in ("", "+", "-") else float(text)


def parse_complex(text: str) -> SpherePoint:
    """A point of P^1 from the literal grammar described in the module docstring."""
    s = text.strip().lower()
    if s in ("inf", "+inf", "infinity"):
        return SpherePoint.infinity()
    if _REAL.match(s):
        z = complex(float(s), 0.0)
    elif m := _IMAG.match(s):
        z = complex(0.0, _coef(m.group("im")))
    elif m := _BOTH.match(s):
        z = complex(float(m.group("re")), _coef(m.group("im")))
    else:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r} (use a+bi, a-bi, a, bi or inf)")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError(f"not a finite complex literal: {text!r}")
    return SpherePoint.from_complex(z)


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _seed(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"seed must be unsigned, got {text!r}")
    return v


def _shells(text):
    try:
        vals = [float(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shell list {text!r}") from None
    if not vals or not all(v > 0 and math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"shells must be positive reals, got {text!r}")
    return vals


# ------------------------------------------------------------------ output


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        out = {}
        for k in sorted(obj):
            out.update(_flatten(obj[k], f"{prefix}{k}."))
        return out
    if isinstance(obj, list):
        out = {}
        for i, v in enumerate(obj):
            out.update(_flatten(v, f"{prefix}{i}."))
        return out
    return {prefix[:-1]: obj}


def emit(obj, fmt: str, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
        return
    flat = _flatten(obj)
    if fmt == "csv":
        stream.write(",".join(flat) + "\n")
        stream.write(",".join(str(v) for v in flat.values()) + "\n")
        return
    width = max((len(k) for k in flat), default=0)
    for k, v in flat.items():
        stream.write(f"{k.ljust(width)}  {v}\n")


# ------------------------------------------------------------------ commands


def cmd_eval(args):
    params = LineParams.from_affine(args.d, args.a)
    emit({"params": params.to_json(), "point": eval_line(params, args.t).to_json()}, args.format)
    return EXIT_OK


def cmd_solve(args):
    p = SpacePoint(args.x, args.y, args.t)
    try:
        params, trace = solve_line_through(p, args.family, ChordalTolerance(args.tol))
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        if args.trace:
            emit({"trace": exc.trace.to_json()}, args.format)
        return EXIT_NUMERIC
    out = {"params": params.to_json()}
    if args.trace:
        out["trace"] = trace.to_json()
    emit(out, args.format)
    return EXIT_OK


def cmd_jacobian(args):
    value, chart = jacobian_with_chart(LineParams.from_affine(args.d, args.a), args.t)
    emit({"jacobian": value, "chart": chart}, args.format)
    return EXIT_OK


def cmd_fiber_zero(args):
    if args.v is not None:
        params = solve_fiber_zero(FiberZeroPoint.from_affine(args.d, args.v), args.family)
        emit({"params": params.to_json()}, args.format)
    else:
        if args.a is None:
            print("fiber-zero needs --a or --v", file=sys.stderr)
            return EXIT_USAGE
        emit(fiber_zero_point(LineParams.from_affine(args.d, args.a)).to_json(), args.format)
    return EXIT_OK


def cmd_act(args):
    g = GroupElement(args.alpha.to_complex(), args.beta.to_complex(), args.g3.to_complex())
    moved = act_on_params(g, LineParams.from_affine(args.d, args.a))
    emit({"group": g.to_json(), "params": moved.to_json()}, args.format)
    return EXIT_OK


def cmd_trajectory(args):
    rows = trajectory_rows(args.d, args.t, args.samples, args.radius)
    buf = io.StringIO()
    write_trajectory_csv(buf, rows)
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_limit(args):
    emit(limit_curve(args.d, args.dir).to_json(), args.format)
    return EXIT_OK


def cmd_verify(args):
    seed = args.seed
    env = os.environ.get("TWISTOR_SEED")
    if env is not None:
        try:
            seed = _seed(env)
        except (ValueError, argparse.ArgumentTypeError):
            print(f"TWISTOR_SEED must be an unsigned integer, got {env!r}", file=sys.stderr)
            return EXIT_USAGE
    try:
        suites = resolve_suites(args.suite) if args.suite else None
        plan = VerificationPlan(
            seed=seed,
            samples_per_suite=args.samples,
            t_shells=tuple(args.shells),
            suites=tuple(suites) if suites else None,
            family=args.family,
            tolerances=({"foliation": args.tol} if args.tol is not None else {}),
        )
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    report = verify_all(plan)
    if args.format == "table":
        sys.stdout.write(report.table() + "\n")
    elif args.format == "csv":
        sys.stdout.write("suite,samples,max_error,tolerance,failures,status\n")
        for s in report.suites:
            sys.stdout.write(f"{s.name},{s.samples},{s.max_error!r},{s.tolerance!r},{s.failure_count},{s.status}\n")
    else:
        sys.stdout.write(report.dumps() + "\n")
    return EXIT_OK if report.passed else EXIT_FAILED


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default="json", help="output format")
    common.add_argument("--tol", type=float, default=None, help="chordal tolerance (default 1e-9)")

    parser = argparse.ArgumentParser(
        prog="twistorlines",
        description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="point of L_{d,a} over t")
    p.add_argument("--d", type=parse_complex, required=True)
    p.add_argument("--a", type=parse_complex, required=True)
    p.add_argument("--t", type=parse_complex, required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("solve", parents=[common], help="the line of a family through (x, y, t)")
    p.add_argument("--x", type=parse_complex, required=True)
    p.add_argument("--y", type=parse_complex, required=True)
    p.add_argument("--t", type=parse_complex, required=True)
    p.add_argument("--family", choices=("m+", "m-"), default="m+")
    p.add_argument("--trace", action="store_true", help="include both candidate solutions")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("jacobian", parents=[common], help="real Jacobian determinant of the incidence map")
    p.add_argument("--d", type=parse_complex, required=True)
    p.add_argument("--a", type=parse_complex, required=True)
    p.add_argument("--t", type=parse_complex, required=True)
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("fiber-zero", parents=[common], help="slope v over t = 0, or the line through (d, v)")
    p.add_argument("--d", type=parse_complex, required=True)
    p.add_argument("--a", type=parse_complex)
    p.add_argument("--v", type=parse_complex)
    p.add_argument("--family", choices=("m+", "m-"), default="m+")
    p.set_defaults(func=cmd_fiber_zero)

    p = sub.add_parser("act", parents=[common], help="apply (alpha, beta, g3) to line parameters")
    p.add_argument("--alpha", type=parse_complex, required=True)
    p.add_argument("--beta", type=parse_complex, required=True)
    p.add_argument("--g3", type=parse_complex, default=SpherePoint(1.0))
    p.add_argument("--d", type=parse_complex, required=True)
    p.add_argument("--a", type=parse_complex, required=True)
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("trajectory", help="CSV of (x, y) along a circle of x values")
    p.add_argument("--d", type=parse_complex, required=True)
    p.add_argument("--t", type=parse_complex, required=True)
    p.add_argument("--samples", type=_positive_int, default=64)
    p.add_argument("--radius", type=float, default=1.0)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("limit", parents=[common], help="reducible limit as a -> 0 or a -> inf")
    p.add_argument("--d", type=parse_complex, required=True)
    p.add_argument("--dir", choices=("zero", "inf"), required=True)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("verify", parents=[common], help="run the verification suites (env TWISTOR_SEED overrides --seed)")
    p.add_argument("--samples", type=_positive_int, default=2000, help="samples per suite (>= 100)")
    p.add_argument("--shells", type=_shells, default=[0.5, 1.0, 2.0], help="comma-separated |t| values")
    p.add_argument("--seed", type=_seed, default=42)
    p.add_argument("--suite", action="append", help="suite or group name; repeatable")
    p.add_argument("--family", choices=("m+", "m-"), default="m+", help="family for the t = 0 fiber suite")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol", None) is None and args.command != "verify":
        args.tol = 1e-9
    if args.command in ("trajectory",) and (args.t.is_zero or args.t.is_infinity):
        print("trajectory needs t outside {0, inf}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except TwistorError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
