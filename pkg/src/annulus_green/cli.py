"""Command-line front end.

Subcommands: eval-green, eval-robin, critical-point, verify, export-grid.
Every numeric record carries its tail bound or solver residual, CSV output
is full-precision with LF line endings, and exit codes follow a stable
contract: 0 success, 1 verification failure, 2 validation error, 3
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterable

import numpy as np

from .core import (
    AnnulusError,
    AnnulusGeometry,
    BracketingError,
    DomainValidationError,
    GridEdgeError,
    QuadratureDegreeError,
    SeriesDivergenceError,
    SingularityError,
    TruncationPolicy,
)
from .critical import concentration_root, find_critical_point
from .green import (
    green_eval,
    green_piecewise_eval,
    modal_coefficient,
    robin2d_eval,
    robin2d_first,
    robin_eval,
    robin_radial_gradient,
)
from .verify import SUITES, render_summary, run_suites

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3

_VALIDATION_ERRORS = (
    DomainValidationError,
    SingularityError,
    SeriesDivergenceError,
    ValueError,
)
_CONVERGENCE_ERRORS = (BracketingError, GridEdgeError, QuadratureDegreeError)


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annulus-green",
        description=(
            "Green and Robin functions of the annulus {a < |x| < 1} via "
            "zonal-harmonic series with certified truncation tails"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, default_n: int = 3) -> None:
        p.add_argument("--n", type=int, default=default_n, help="space dimension")
        p.add_argument("--a", type=float, default=0.5, help="inner radius in (0, 1)")
        p.add_argument("--tol", type=float, default=1e-10, help="target absolute tail bound")
        p.add_argument("--max-terms", type=int, default=100_000, help="series term cap")
        p.add_argument(
            "--tail-safety",
            type=int,
            default=2,
            help="consecutive certified-tail successes required before stopping",
        )
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    p_green = sub.add_parser("eval-green", help="evaluate the Green function at a pair")
    common(p_green)
    p_green.add_argument(
        "coords",
        type=float,
        nargs="+",
        help="2n floats: the n coordinates of x followed by the n coordinates of y",
    )

    p_robin = sub.add_parser("eval-robin", help="evaluate the Robin function at a radius")
    common(p_robin)
    p_robin.add_argument("radius", type=float, help="radius strictly inside (a, 1)")

    p_crit = sub.add_parser("critical-point", help="locate the radial critical point")
    common(p_crit)
    p_crit.add_argument("--solver-tol", type=float, default=1e-12)

    p_verify = sub.add_parser("verify", help="run the verification suites")
    common(p_verify)
    p_verify.add_argument(
        "--suite",
        action="append",
        choices=sorted(SUITES),
        help="restrict to the named suite (repeatable; default all)",
    )
    p_verify.add_argument(
        "--default-policy",
        action="store_true",
        help="let each suite pick its own truncation policy instead of --tol/--max-terms",
    )

    p_grid = sub.add_parser("export-grid", help="export plot data over a radial grid")
    common(p_grid, default_n=3)
    p_grid.add_argument(
        "quantity", choices=("green-slice", "robin", "gradient", "modal-coefficient")
    )
    p_grid.add_argument("--grid-points", type=int, default=1000)
    p_grid.add_argument("--r-min", type=float, default=None)
    p_grid.add_argument("--r-max", type=float, default=None)
    p_grid.add_argument(
        "--y", type=str, default=None, help="comma-separated source point for green-slice"
    )
    p_grid.add_argument("--mode", type=int, default=0, help="mode index for modal-coefficient")
    p_grid.add_argument(
        "--s-radius", type=float, default=None, help="second radius for modal-coefficient"
    )
    return parser


def _policy_from(args) -> TruncationPolicy:
    return TruncationPolicy(
        abs_tol=args.tol, max_terms=args.max_terms, tail_safety=args.tail_safety
    )


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_record(args, record: dict) -> None:
    if args.format == "json":
        _emit(args, json.dumps(record, sort_keys=True, indent=2) + "\n")
    else:
        keys = list(record)
        row = ",".join(
            _fmt(record[k]) if isinstance(record[k], float) else str(record[k]) for k in keys
        )
        _emit(args, ",".join(keys) + "\n" + row + "\n")


def _emit_table(args, header: list[str], rows: Iterable[list]) -> None:
    if args.format == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(
                ",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row)
            )
        _emit(args, "\n".join(lines) + "\n")
    else:
        record = {"columns": header, "rows": [list(r) for r in rows]}
        _emit(args, json.dumps(record, sort_keys=True, indent=2) + "\n")


def _cmd_eval_green(args) -> int:
    geom = AnnulusGeometry(args.n, args.a)
    policy = _policy_from(args)
    coords = [float(c) for c in args.coords]
    if len(coords) != 2 * geom.n:
        raise DomainValidationError(
            f"expected {2 * geom.n} coordinates for n = {geom.n}, got {len(coords)}"
        )
    x = np.array(coords[: geom.n])
    y = np.array(coords[geom.n :])
    res = green_eval(geom, x, y, policy)
    record = {
        "command": "eval-green",
        "n": geom.n,
        "a": geom.a,
        "x": [float(v) for v in x],
        "y": [float(v) for v in y],
        "value": res.value,
        "terms_used": res.terms_used,
        "tail_bound": res.tail_bound,
        "converged": res.converged,
    }
    rx, ry = float(np.linalg.norm(x)), float(np.linalg.norm(y))
    all_converged = res.converged
    if abs(rx - ry) > 1e-9:
        alt = green_piecewise_eval(geom, x, y, policy)
        record["piecewise_value"] = alt.value
        record["piecewise_tail_bound"] = alt.tail_bound
        record["piecewise_terms_used"] = alt.terms_used
        record["piecewise_converged"] = alt.converged
        record["path_difference"] = abs(alt.value - res.value)
        all_converged = all_converged and alt.converged
    if args.format == "csv":
        flat = dict(record)
        flat["x"] = ";".join(_fmt(v) for v in x)
        flat["y"] = ";".join(_fmt(v) for v in y)
        _emit_record(args, flat)
    else:
        _emit_record(args, record)
    return EXIT_OK if all_converged else EXIT_NO_CONVERGENCE


def _cmd_eval_robin(args) -> int:
    policy = _policy_from(args)
    if args.n == 2:
        if not (0.0 < args.a < 1.0):
            raise DomainValidationError(f"inner radius must be in (0, 1), got {args.a}")
        res = robin2d_eval(args.a, args.radius, policy)
    else:
        geom = AnnulusGeometry(args.n, args.a)
        res = robin_eval(geom, args.radius, policy)
    record = {
        "command": "eval-robin",
        "n": args.n,
        "a": args.a,
        "r": args.radius,
        "value": res.value,
        "terms_used": res.terms_used,
        "tail_bound": res.tail_bound,
        "converged": res.converged,
    }
    _emit_record(args, record)
    return EXIT_OK if res.converged else EXIT_NO_CONVERGENCE


def _cmd_critical_point(args) -> int:
    geom = AnnulusGeometry(args.n, args.a)
    policy = _policy_from(args)
    report = find_critical_point(geom, policy, solver_tol=args.solver_tol)
    record = {
        "command": "critical-point",
        "n": geom.n,
        "a": geom.a,
        "r0": report.r0,
        "bracket_lo": report.bracket[0],
        "bracket_hi": report.bracket[1],
        "residual": report.residual,
        "second_derivative": report.second_derivative,
        "second_derivative_uncertainty": report.second_derivative_uncertainty,
        "is_radial_minimum": report.is_radial_minimum,
        "nondegenerate": report.nondegenerate,
        "method": report.method,
        "evaluations": report.evaluations,
    }
    if geom.n >= 3:
        root = concentration_root(geom, policy, solver_tol=args.solver_tol)
        record["concentration_root"] = root
        record["concentration_root_difference"] = abs(root - report.r0)
    _emit_record(args, record)
    return EXIT_OK


def _cmd_verify(args) -> int:
    policy = None if args.default_policy else _policy_from(args)
    results = run_suites(args.suite, seed=args.seed, policy=policy)
    summary = render_summary(results, args.seed)
    _emit(args, summary)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAIL


def _radial_grid(args, geom: AnnulusGeometry) -> np.ndarray:
    span = 1.0 - geom.a
    lo = args.r_min if args.r_min is not None else geom.a + 1e-3 * span
    hi = args.r_max if args.r_max is not None else 1.0 - 1e-3 * span
    if args.grid_points < 2:
        raise DomainValidationError("need at least 2 grid points")
    if not (geom.a - 1e-12 <= lo < hi <= 1.0 + 1e-12):
        raise DomainValidationError(f"grid window [{lo}, {hi}] must sit inside [{geom.a}, 1]")
    return np.linspace(lo, hi, args.grid_points)


def _cmd_export_grid(args) -> int:
    geom = AnnulusGeometry(args.n, args.a)
    policy = _policy_from(args)
    status = EXIT_OK

    if args.quantity == "robin":
        radii = _radial_grid(args, geom)
        rows = []
        for r in radii:
            r = float(r)
            res = robin2d_eval(geom.a, r, policy) if geom.n == 2 else robin_eval(geom, r, policy)
            rows.append([r, res.value, res.tail_bound, res.terms_used, res.converged])
            if not res.converged:
                status = EXIT_NO_CONVERGENCE
        _emit_table(args, ["r", "robin", "tail_bound", "terms_used", "converged"], rows)
        return status

    if args.quantity == "gradient":
        radii = _radial_grid(args, geom)
        rows = []
        for r in radii:
            r = float(r)
            res = (
                robin2d_first(geom.a, r, policy).scaled(r)
                if geom.n == 2
                else robin_radial_gradient(geom, r, policy)
            )
            rows.append([r, res.value, res.tail_bound, res.terms_used, res.converged])
            if not res.converged:
                status = EXIT_NO_CONVERGENCE
        _emit_table(
            args, ["r", "radial_gradient", "tail_bound", "terms_used", "converged"], rows
        )
        return status

    if args.quantity == "green-slice":
        if args.y is None:
            raise DomainValidationError("green-slice needs --y with n comma-separated floats")
        y = np.array([float(v) for v in args.y.split(",")])
        y = geom.point(y)
        lo = args.r_min if args.r_min is not None else geom.a
        hi = args.r_max if args.r_max is not None else 1.0
        if not (geom.a - 1e-12 <= lo < hi <= 1.0 + 1e-12):
            raise DomainValidationError(f"grid window [{lo}, {hi}] must sit inside [{geom.a}, 1]")
        radii = np.linspace(lo, hi, args.grid_points)
        e1 = np.zeros(geom.n)
        e1[0] = 1.0
        rows = []
        for r in radii:
            r = float(r)
            x = r * e1
            if float(np.linalg.norm(x - y)) < 1e-6:
                # refused near-singular point: emit NaNs rather than bad data
                rows.append([r, float("nan"), float("nan"), 0, False])
                continue
            res = green_eval(geom, x, y, policy)
            rows.append([r, res.value, res.tail_bound, res.terms_used, res.converged])
            if not res.converged:
                status = EXIT_NO_CONVERGENCE
        _emit_table(args, ["r", "green", "tail_bound", "terms_used", "converged"], rows)
        return status

    # modal-coefficient
    if args.s_radius is None:
        raise DomainValidationError("modal-coefficient needs --s-radius")
    radii = _radial_grid(args, geom)
    rows = []
    for r in radii:
        r = float(r)
        value = modal_coefficient(geom, args.mode, r, args.s_radius)
        rows.append([r, value, 0.0])  # closed form: roundoff-level error only
    _emit_table(args, ["r", "coefficient", "tail_bound"], rows)
    return status


_COMMANDS = {
    "eval-green": _cmd_eval_green,
    "eval-robin": _cmd_eval_robin,
    "critical-point": _cmd_critical_point,
    "verify": _cmd_verify,
    "export-grid": _cmd_export_grid,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except _VALIDATION_ERRORS as exc:
        _report_error(args, exc)
        return EXIT_VALIDATION
    except _CONVERGENCE_ERRORS as exc:
        _report_error(args, exc)
        return EXIT_NO_CONVERGENCE
    except AnnulusError as exc:
        _report_error(args, exc)
        return EXIT_NO_CONVERGENCE


def _report_error(args, exc: Exception) -> None:
    if getattr(args, "format", "json") == "json":
        record = {"error": type(exc).__name__, "message": str(exc)}
        sys.stdout.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        sys.stderr.write(f"error: {exc}\n")


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
