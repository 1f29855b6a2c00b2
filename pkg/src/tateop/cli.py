"""Command-line surface: every computation as a reproducible report.

Output is deterministic by construction: fixed key order, rationals as
"a/b" strings, floats printed to 15 significant digits, and a fixed
basis/entry ordering inherited from the library.  Exit codes: 0 when all
checks pass, 1 when a mathematical check fails, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .correlator import height_limit_check, two_point
from .determinant import (
    angular_determinant,
    det_D,
    radial_det_contribution,
    zeta_pi_series,
    zeta_pi_value,
    zeta_prime_at_zero,
)
from .matrix import build_matrix, verify_matrix
from .operator import (
    KernelContext,
    apply_D_height,
    height_check_points,
    kernel_H,
)
from .padic import PrimeParams, format_rational, parse_rational, point, valuation
from .spectral import (
    enumerate_conductor,
    enumerate_spectrum,
    eigenvalue_radial_closed,
    eigenvalue_radial_integral,
    spectral_gap,
    weyl_count,
    AngularCharacter,
)
from .tree import tree_quotient, tree_quotient_dot

LIMIT_TOLERANCE = 1e-6
INTEGRAL_CHECK_MODULUS_CAP = 5000


class UsageError(Exception):
    """Invalid arguments that argparse alone cannot catch."""


@dataclass(frozen=True)
class RunConfig:
    """One validated invocation: prime context, subcommand options, output routing.

    The three output formats are mutually exclusive by construction (a single
    --format choice); p/m validation is deferred to :meth:`context` so the
    error surfaces as a usage failure.
    """

    command: str
    p: int
    m: int
    fmt: str
    out: str | None
    options: dict

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fixed = {"command", "p", "m", "format", "out"}
        return cls(
            command=args.command,
            p=args.p,
            m=args.m,
            fmt=args.format,
            out=args.out,
            options={k: v for k, v in vars(args).items() if k not in fixed},
        )

    def context(self) -> PrimeParams:
        try:
            return PrimeParams(self.p, self.m)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


@dataclass
class Report:
    """One command's payload: canonical JSON data plus a flat projection."""

    data: dict
    columns: tuple[str, ...]
    rows: list[tuple]
    code: int
    raw_text: str | None = field(default=None)


def _fmt_float(x: float) -> str:
    return format(float(x), ".15g")


def _json_ready(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, bool) or isinstance(obj, int) or obj is None:
        return obj
    if isinstance(obj, float):
        return float(_fmt_float(obj))
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    return obj


def _cell(x) -> str:
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return _fmt_float(x)
    return str(x)


def render(report: Report, fmt: str) -> str:
    if report.raw_text is not None:
        return report.raw_text
    if fmt == "json":
        return json.dumps(_json_ready(report.data), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([_cell(x) for x in row])
        return buf.getvalue()
    if fmt == "pretty":
        table = [list(report.columns)] + [
            [_cell(x) for x in row] for row in report.rows
        ]
        widths = [max(len(r[i]) for r in table) for i in range(len(report.columns))]
        lines = []
        for idx, row in enumerate(table):
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
            if idx == 0:
                lines.append("  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def cmd_greens(cfg: RunConfig) -> Report:
    ctx = cfg.context()
    max_vdist = cfg.options["max_vdist"]
    expect = cfg.options["expect"]
    if max_vdist < 0:
        raise UsageError("--max-vdist must be >= 0")
    kc = KernelContext(ctx)
    expected = (
        parse_rational(expect)
        if expect is not None
        else -Fraction(ctx.p, ctx.m * (ctx.p - 1))
    )
    rows = []
    all_pass = True
    for x in height_check_points(ctx, max_vdist):
        value = apply_D_height(x, kc)
        ok = value == expected
        all_pass = all_pass and ok
        rows.append(
            (
                format_rational(x.value),
                x.v,
                valuation(x.value - 1, ctx.p),
                value,
                expected,
                ok,
            )
        )
    data = {
        "command": "greens",
        "p": ctx.p,
        "m": ctx.m,
        "expected": expected,
        "all_pass": all_pass,
        "rows": [
            {
                "x": r[0],
                "v": r[1],
                "vdist": r[2],
                "Dh": r[3],
                "expected": r[4],
                "pass": r[5],
            }
            for r in rows
        ],
    }
    return Report(
        data=data,
        columns=("x", "v", "vdist", "Dh", "expected", "pass"),
        rows=rows,
        code=0 if all_pass else 1,
    )


def cmd_spectrum(cfg: RunConfig) -> Report:
    ctx = cfg.context()
    max_conductor = cfg.options["max_conductor"]
    if max_conductor < 1:
        raise UsageError("--max-conductor must be >= 1")
    entries = enumerate_spectrum(max_conductor, ctx)
    integral_checks = []
    checks_pass = True
    zeta = AngularCharacter(ctx.m, 1 % ctx.m)
    for n in range(1, max_conductor + 1):
        if ctx.p**n > INTEGRAL_CHECK_MODULUS_CAP:
            break
        chars = enumerate_conductor(ctx.p, n)
        if not chars:
            continue
        closed = eigenvalue_radial_closed(n, ctx)
        integral = eigenvalue_radial_integral(chars[0], zeta, ctx)
        err = abs(integral - complex(float(closed)))
        ok = err < 1e-10
        checks_pass = checks_pass and ok
        integral_checks.append(
            {
                "n": n,
                "closed": closed,
                "integral": integral.real,
                "abs_error": err,
                "pass": ok,
            }
        )
    lam_top = eigenvalue_radial_closed(max_conductor, ctx)
    count = weyl_count(lam_top, ctx)
    weyl_ok = count == ctx.m * lam_top
    checks_pass = checks_pass and weyl_ok
    total = sum(e.multiplicity for e in entries)
    data = {
        "command": "spectrum",
        "p": ctx.p,
        "m": ctx.m,
        "max_conductor": max_conductor,
        "entries": [e.to_json_dict() for e in entries],
        "total_multiplicity": total,
        "spectral_gap": spectral_gap(ctx),
        "weyl": {
            "lambda": lam_top,
            "count": count,
            "m_lambda": ctx.m * lam_top,
            "pass": weyl_ok,
        },
        "integral_checks": integral_checks,
        "all_pass": checks_pass,
    }
    rows = [(e.kind, e.index, e.eigenvalue, e.multiplicity) for e in entries]
    return Report(
        data=data,
        columns=("kind", "index", "lambda", "mult"),
        rows=rows,
        code=0 if checks_pass else 1,
    )


def cmd_det(cfg: RunConfig) -> Report:
    ctx = cfg.context()
    det = det_D(ctx)
    angular = angular_determinant(ctx)
    radial = radial_det_contribution(ctx)
    series_checks = []
    ok = det == angular * radial
    for s in (2, 3, 4):
        closed = zeta_pi_value(float(s), ctx)
        series = zeta_pi_series(float(s), ctx)
        err = abs(closed - series)
        this_ok = err < 1e-12
        ok = ok and this_ok
        series_checks.append(
            {"s": s, "closed": closed, "series": series, "abs_error": err, "pass": this_ok}
        )
    data = {
        "command": "det",
        "p": ctx.p,
        "m": ctx.m,
        "det": det,
        "angular_factor": angular,
        "radial_factor": radial,
        "zeta_prime_zero": zeta_prime_at_zero(ctx),
        "zeta_series_checks": series_checks,
        "all_pass": ok,
    }
    rows = [
        ("det", det),
        ("angular_factor", angular),
        ("radial_factor", radial),
        ("zeta_prime_zero", zeta_prime_at_zero(ctx)),
        ("all_pass", ok),
    ]
    return Report(
        data=data, columns=("quantity", "value"), rows=rows, code=0 if ok else 1
    )


def cmd_matrix(cfg: RunConfig) -> Report:
    ctx = cfg.context()
    level = cfg.options["level"]
    dump = cfg.options["dump"]
    if level < 1:
        raise UsageError("--level must be >= 1")
    cap_env = os.environ.get("TATE_MAX_DIM")
    cap = None
    if cap_env is not None:
        try:
            cap = int(cap_env)
        except ValueError as exc:
            raise UsageError(f"TATE_MAX_DIM must be an integer, got {cap_env!r}") from exc
    kc = KernelContext(ctx)
    try:
        mx = build_matrix(level, kc, cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = verify_matrix(mx, ctx)
    if dump:
        with open(dump + ".csv", "w") as fh:
            fh.write(mx.to_csv())
        with open(dump + ".basis.json", "w") as fh:
            json.dump(_json_ready(mx.basis_manifest()), fh, indent=2)
            fh.write("\n")
    data = {
        "command": "matrix",
        "p": ctx.p,
        "m": ctx.m,
        "level": level,
        "dimension": mx.dimension,
        "eigenvalues": mx.eigenvalues(),
        "report": report.to_json_dict(),
        "all_pass": report.passed,
    }
    rows = [
        ("dimension", report.dimension),
        ("symmetric", report.symmetric),
        ("row_sums_zero", report.row_sums_zero),
        ("min_eigenvalue", report.min_eigenvalue),
        ("positive_semidefinite", report.positive_semidefinite),
        ("kernel_dimension", report.kernel_dimension),
        ("multiset_deviation", report.multiset_deviation),
        ("spectrum_match", report.spectrum_match),
        ("eigenfunction_residual", report.eigenfunction_residual),
        ("eigenfunctions_ok", report.eigenfunctions_ok),
        ("all_pass", report.passed),
    ]
    return Report(
        data=data,
        columns=("check", "value"),
        rows=rows,
        code=0 if report.passed else 1,
    )


def cmd_correlator(cfg: RunConfig) -> Report:
    ctx = cfg.context()
    delta = cfg.options["delta"]
    try:
        x1 = point(parse_rational(cfg.options["x1"]), ctx)
        x2 = point(parse_rational(cfg.options["x2"]), ctx)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad point: {exc}") from exc
    if delta <= 0:
        raise UsageError("--delta must be positive")
    if x1.value == x2.value:
        raise UsageError("points must be distinct")
    kc = KernelContext(ctx)
    value = two_point(x1, x2, delta, ctx)
    at_one = two_point(x1, x2, 1.0, ctx)
    kernel = float(kernel_H(x1, x2, kc))
    kernel_ok = abs(at_one - kernel) <= 1e-12 * (1 + abs(kernel))
    estimate, target = height_limit_check(x1, x2, ctx)
    limit_ok = abs(estimate - target) < LIMIT_TOLERANCE * (1 + abs(target))
    ok = kernel_ok and limit_ok
    data = {
        "command": "correlator",
        "p": ctx.p,
        "m": ctx.m,
        "x1": x1.value,
        "x2": x2.value,
        "delta": float(delta),
        "two_point": value,
        "two_point_at_delta_1": at_one,
        "kernel": kernel,
        "kernel_match": kernel_ok,
        "limit_estimate": estimate,
        "limit_target": target,
        "limit_match": limit_ok,
        "all_pass": ok,
    }
    rows = [
        ("two_point", value),
        ("two_point_at_delta_1", at_one),
        ("kernel", kernel),
        ("kernel_match", kernel_ok),
        ("limit_estimate", estimate),
        ("limit_target", target),
        ("limit_match", limit_ok),
        ("all_pass", ok),
    ]
    return Report(
        data=data, columns=("quantity", "value"), rows=rows, code=0 if ok else 1
    )


def cmd_tree(cfg: RunConfig) -> Report:
    depth = cfg.options["depth"]
    if depth < 0:
        raise UsageError("--depth must be >= 0")
    try:
        nodes, edges = tree_quotient(cfg.p, cfg.m, depth)
        dot = tree_quotient_dot(cfg.p, cfg.m, depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    data = {"command": "tree", "nodes": len(nodes), "edges": len(edges)}
    return Report(
        data=data,
        columns=("nodes", "edges"),
        rows=[(len(nodes), len(edges))],
        code=0,
        raw_text=dot,
    )


HANDLERS = {
    "greens": cmd_greens,
    "spectrum": cmd_spectrum,
    "det": cmd_det,
    "matrix": cmd_matrix,
    "correlator": cmd_correlator,
    "tree": cmd_tree,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="prime p")
    common.add_argument("--m", type=int, required=True, help="period exponent m >= 1")
    common.add_argument(
        "--format",
        choices=("json", "csv", "pretty"),
        default="json",
        help="output format (default json)",
    )
    common.add_argument("--out", default=None, help="write output to this path")
    parser = argparse.ArgumentParser(
        prog="tateop",
        description="Exact computations for the nonlocal boundary operator on the Tate curve domain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("greens", parents=[common], help="height identity sweep")
    g.add_argument("--max-vdist", type=int, default=6, help="largest v(x-1) sampled")
    g.add_argument(
        "--expect",
        default=None,
        help="override the expected constant (rational a/b); mismatches exit 1",
    )

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalue table and checks")
    s.add_argument("--max-conductor", type=int, required=True, help="largest radial level")

    sub.add_parser("det", parents=[common], help="zeta-regularized determinant")

    x = sub.add_parser("matrix", parents=[common], help="exact level-k matrix checks")
    x.add_argument("--level", type=int, required=True, help="discretization level k >= 1")
    x.add_argument("--dump", default=None, help="write PREFIX.csv and PREFIX.basis.json")

    c = sub.add_parser("correlator", parents=[common], help="two-point function and height limit")
    c.add_argument("--x1", required=True, help="first point (rational a/b)")
    c.add_argument("--x2", required=True, help="second point (rational a/b)")
    c.add_argument("--delta", type=float, default=1.0, help="scaling dimension (default 1)")

    t = sub.add_parser("tree", parents=[common], help="DOT export of the tree quotient")
    t.add_argument("--depth", type=int, required=True, help="branch truncation depth")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    cfg = RunConfig.from_args(args)
    try:
        report = HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"math check failed: {exc}", file=sys.stderr)
        return 1
    text = render(report, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.code


if __name__ == "__main__":
    sys.exit(main())
