"""Command-line front end.

Exit codes: 0 residual within tolerance, 2 residual above tolerance,
1 evaluation error, 64 usage error.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Sequence

from . import corollaries as cor
from ._backend import worker_count
from .arith import TruncationPolicy
from .errors import ZetalabError
from .identities import IdentityCase, VerificationReport, verify
from .meijerg import QuadraturePolicy
from .oracle import reference_constants, reference_zeta

SCHEMA_VERSION = 1
CSV_HEADER = ("k", "r", "x", "lhs", "rhs", "residual", "terms", "ms")
EXIT_OK, EXIT_ERROR, EXIT_RESIDUAL, EXIT_USAGE = 0, 1, 2, 64

DEFAULT_TOL = 1e-8
DEFAULT_SERIES_TOL = 1e-11
DEFAULT_QUAD_TOL = 1e-10

CONSTANT_NAMES = ("zeta_half", "zeta_minus_half", "zeta_1_over_k", "zeta_odd")
COROLLARY_NAMES = ("schlomilch", "dedekind", "eisenstein", "zeta_minus_half", "ramanujan_odd", "wigert")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- expressions

_BINOPS: dict[type, Callable[[float, float], float]] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY: dict[type, Callable[[float], float]] = {ast.USub: operator.neg, ast.UAdd: operator.pos}
# the lookahead stops "1e-4" from being read as 1*e-4
_IMPLICIT = re.compile(r"(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\))(?![eE][+-]?\d)\s*(?=[A-Za-zπ(])")


def parse_expr(text: str, variables: dict[str, float] | None = None) -> float:
    """Evaluate a small arithmetic expression over π.

    Accepts decimals, ``pi`` (or ``π``), ``+ - * / ^ **``, parentheses,
    implicit multiplication (``2pi``) and the names in ``variables``.
    """
    names = {"pi": math.pi, "PI": math.pi, "π": math.pi}
    names.update(variables or {})
    src = _IMPLICIT.sub(r"\1*", text.strip()).replace("^", "**").replace("π", "pi")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse expression {text!r}") from exc

    def ev(node: ast.AST) -> float:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise UsageError(f"unknown name {node.id!r} in {text!r}")
            return float(names[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise UsageError(f"unsupported syntax in {text!r}")

    try:
        value = ev(tree)
    except (ZeroDivisionError, OverflowError) as exc:
        raise UsageError(f"cannot evaluate {text!r}: {exc}") from exc
    if not math.isfinite(value):
        raise UsageError(f"{text!r} is not finite")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


# ---------------------------------------------------------------- formatting


def _fmt(v: float) -> str:
    return repr(float(v))


def _report_payload(report: VerificationReport, tol: float) -> dict[str, Any]:
    data = {"schema": SCHEMA_VERSION}
    data.update(report.to_dict())
    data["tol"] = tol
    data["pass"] = report.abs_residual < tol
    return data


def report_from_payload(data: dict[str, Any]) -> VerificationReport:
    return VerificationReport.from_dict(data)


def _report_text(report: VerificationReport, tol: float, title: str) -> str:
    c = report.case
    lines = [f"{title}  k={c.k} r={c.r} x={_fmt(c.x)}"]
    lines.append(f"  lhs            {_fmt(report.lhs.value)}  (terms {report.lhs.terms_used})")
    for key, val in report.rhs_terms.items():
        lines.append(f"  {key:<14} {_fmt(val)}")
    lines.append(f"  rhs            {_fmt(report.rhs_total)}")
    lines.append(f"  abs residual   {report.abs_residual:.3e}")
    lines.append(f"  rel residual   {report.rel_residual:.3e}")
    lines.append(f"  {'PASS' if report.abs_residual < tol else 'FAIL'} (tol {tol:.1e})")
    return "\n".join(lines) + "\n"


def _csv_row(report: VerificationReport) -> list[str]:
    c = report.case
    return [
        str(c.k),
        str(c.r),
        _fmt(c.x),
        _fmt(report.lhs.value),
        _fmt(report.rhs_total),
        _fmt(report.abs_residual),
        str(report.lhs.terms_used),
        f"{report.effort.get('ms', 0.0):.3f}",
    ]


def _csv_text(rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(report: VerificationReport, args: argparse.Namespace, title: str) -> int:
    if args.format == "json":
        text = json.dumps(_report_payload(report, args.tol), indent=2) + "\n"
    elif args.format == "csv":
        text = _csv_text([_csv_row(report)])
    else:
        text = _report_text(report, args.tol, title)
    _emit(text, args.output)
    return EXIT_OK if report.abs_residual < args.tol else EXIT_RESIDUAL


def _policies(args: argparse.Namespace) -> tuple[TruncationPolicy, QuadraturePolicy]:
    st = args.series_tol
    return TruncationPolicy(abs_tol=st, rel_tol=st), QuadraturePolicy(tol=args.quad_tol)


# ---------------------------------------------------------------- commands


def cmd_verify(args: argparse.Namespace) -> int:
    case = IdentityCase(args.k, args.r, parse_expr(args.x))
    policy, qpolicy = _policies(args)
    return _emit_report(verify(case, policy, qpolicy), args, "verify")


def _table_row(case: IdentityCase, policy, qpolicy) -> tuple[VerificationReport | None, str | None]:
    try:
        return verify(case, policy, qpolicy), None
    except (ZetalabError, OverflowError) as exc:
        return None, str(exc)


def cmd_table(args: argparse.Namespace) -> int:
    ks, rs = _int_list(args.k), _int_list(args.r)
    xs = [parse_expr(v) for v in args.x.split(",") if v.strip()]
    cases = [IdentityCase(k, r, x) for k in ks for r in rs for x in xs]
    skipped = [c for c in cases if not c.supported]
    cases = [c for c in cases if c.supported]
    for c in skipped:
        print(f"skipped k={c.k} r={c.r}: unsupported parity class", file=sys.stderr)
    policy, qpolicy = _policies(args)
    with ThreadPoolExecutor(max_workers=worker_count(os.cpu_count() or 1)) as pool:
        # map preserves submission order, so rows follow the grid order
        results = list(pool.map(lambda c: _table_row(c, policy, qpolicy), cases))
    rows, status = [], EXIT_OK
    for case, (report, err) in zip(cases, results):
        if report is None:
            print(f"error k={case.k} r={case.r} x={_fmt(case.x)}: {err}", file=sys.stderr)
            rows.append([str(case.k), str(case.r), _fmt(case.x), "nan", "nan", "nan", "0", "0.000"])
            status = EXIT_ERROR
            continue
        rows.append(_csv_row(report))
        if report.abs_residual >= args.tol and status == EXIT_OK:
            status = EXIT_RESIDUAL
    _emit(_csv_text(rows), args.output)
    return status


def _constant(name: str, args: argparse.Namespace, policy: TruncationPolicy) -> dict[str, Any]:
    refs = reference_constants()
    alpha = parse_expr(args.alpha) if args.alpha else 2.0 * math.pi**1.5
    if name == "zeta_half":
        value, ref, params = cor.zeta_half_via_ramanujan(alpha, policy), refs["zeta_half"], {"alpha": alpha}
    elif name == "zeta_minus_half":
        value, ref, params = cor.solve_zeta_minus_half(alpha, policy), refs["zeta_minus_half"], {"alpha": alpha}
    elif name == "zeta_1_over_k":
        k = args.k if args.k is not None else 2
        x = parse_expr(args.x) if args.x else 1.0
        value, ref, params = cor.zeta_one_over_k_via_wigert(k, x, policy), reference_zeta(1.0 / k), {"k": k, "x": x}
    else:
        m = args.m if args.m is not None else 1
        x = parse_expr(args.x) if args.x else cor.default_odd_zeta_x(m)
        value, ref, params = cor.solve_odd_zeta(m, x, policy), reference_zeta(2.0 * m + 1.0), {"m": m, "x": x}
    return {"name": name, "value": value, "reference": ref, "delta": value - ref, "params": params}


def cmd_constants(args: argparse.Namespace) -> int:
    policy, _ = _policies(args)
    entries = [_constant(n, args, policy) for n in args.names]
    ok = all(abs(e["delta"]) < args.tol for e in entries)
    if args.format == "json":
        text = json.dumps({"schema": SCHEMA_VERSION, "constants": entries, "tol": args.tol}, indent=2) + "\n"
    else:
        lines = [f"{'name':<16} {'value':>24} {'reference':>24} {'delta':>10}"]
        for e in entries:
            lines.append(f"{e['name']:<16} {_fmt(e['value']):>24} {_fmt(e['reference']):>24} {e['delta']:>10.2e}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if ok else EXIT_RESIDUAL


def cmd_corollary(args: argparse.Namespace) -> int:
    policy, _ = _policies(args)
    name = args.name
    alpha = parse_expr(args.alpha) if args.alpha else math.pi
    m = args.m if args.m is not None else 1
    if name == "schlomilch":
        report = cor.schlomilch_identity(alpha, policy)
    elif name == "dedekind":
        report = cor.dedekind_identity(alpha, policy)
    elif name == "eisenstein":
        report = cor.eisenstein_identity(m, alpha, policy)
    elif name == "zeta_minus_half":
        a = parse_expr(args.alpha) if args.alpha else 2.0 * math.pi**1.5
        report = cor.zeta_minus_half_identity(a, policy)
    elif name == "ramanujan_odd":
        x = parse_expr(args.x, {"ALPHA": alpha}) if args.x else 2.0 * math.pi
        report = cor.ramanujan_odd_zeta_check(m, x, policy)
    else:
        k = args.k if args.k is not None else 2
        x = parse_expr(args.x, {"ALPHA": alpha}) if args.x else 1.0
        report = cor.wigert_identity(k, x, policy)
    return _emit_report(report, args, name)


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common(p: argparse.ArgumentParser, formats: Sequence[str] = ("text", "json", "csv")) -> None:
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="residual tolerance (default 1e-8)")
    p.add_argument("--series-tol", type=float, default=DEFAULT_SERIES_TOL, help="series truncation tolerance")
    p.add_argument("--quad-tol", type=float, default=DEFAULT_QUAD_TOL, help="quadrature tolerance")
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--output", "-o", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zetalab", description="Evaluate and verify Lambert-series transformation formulas.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="verify one (k, r, x) case")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--x", required=True, help="decimal or expression such as 2pi")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="verify a grid of cases, CSV output")
    p.add_argument("--k", required=True, help="comma-separated k values")
    p.add_argument("--r", required=True, help="comma-separated r values")
    p.add_argument("--x", required=True, help="comma-separated x values or expressions")
    _common(p, formats=("csv",))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("constants", help="zeta values derived from the identities")
    p.add_argument("names", nargs="+", choices=CONSTANT_NAMES)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--x")
    p.add_argument("--alpha")
    _common(p, formats=("text", "json"))
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("corollary", help="check one of the special-case identities")
    p.add_argument("name", choices=COROLLARY_NAMES)
    p.add_argument("--alpha", help="alpha (expression); beta follows from the corollary's constraint")
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--x", help="x (expression, may use ALPHA)")
    _common(p)
    p.set_defaults(func=cmd_corollary)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"zetalab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ZetalabError, OverflowError) as exc:
        print(f"zetalab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


__all__ = ["main", "build_parser", "parse_expr", "report_from_payload", "CSV_HEADER", "SCHEMA_VERSION"]
