"""Command-line interface: ``wdbounds {coeffs,bounds,verify,table}``.

Exit codes: 0 success / verified, 1 violated, 2 usage error, 3 indeterminate.
Errors are written to stderr as a single JSON object.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction


from .bounds import MIN_ORDER, BoundPair, build_pair
from .errors import WDBoundsError
from .exact import BigFloat, as_pi_constant, format_exact, pi_eval
from .series import sf_d, sf_e, wilker_c
from .verify import INDETERMINATE, VERIFIED, VIOLATED, verify_escalating, verify_pair, wilker_error_table

SCHEMA_VERSION = 1
MAX_INDEX = 10000

SEQUENCES = {
    "c": wilker_c,
    "d3": lambda m: sf_d("three", m),
    "dpi": lambda m: sf_d("pi", m),
    "e": sf_e,
}
TARGETS = {"wilker": "wilker", "sf-d3": "sf_d3", "sf-dpi": "sf_dpi", "sf-e": "sf_e"}
EXIT_CODES = {VERIFIED: 0, VIOLATED: 1, INDETERMINATE: 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# formatting


def decimal_string(value, digits: int) -> str:
    """``value`` rounded half-even to exactly ``digits`` significant digits, positional notation."""
    if isinstance(value, BigFloat):
        q = Fraction(*map(int, value.as_integer_ratio()))
    else:
        c = as_pi_constant(value)
        if c.is_rational:
            q = c.as_fraction()
        else:
            approx = pi_eval(c, int(digits * 3.33) + 64)
            q = Fraction(*map(int, approx.as_integer_ratio()))
    if q == 0:
        return "0"
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
    d = ctx.divide(Decimal(q.numerator), Decimal(q.denominator))
    d = d.quantize(Decimal(1).scaleb(d.adjusted() - digits + 1), context=ctx)
    return format(d, "f")


def _render(value, mode: str, digits: int) -> str:
    return format_exact(value) if mode == "exact" else decimal_string(value, digits)


def _emit(command: dict, records: list[dict], fmt: str, out) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(records[0]) if records else [], lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        out.write(buf.getvalue())
        return
    payload = json.dumps(records, sort_keys=True, separators=(",", ":"))
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "records": records,
        "payload_sha256": hashlib.sha256(payload.encode()).hexdigest(),
    }
    out.write(json.dumps(doc, indent=2) + "\n")


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected a..b") from None


# ---------------------------------------------------------------------------
# commands


def cmd_coeffs(args, out) -> int:
    if not 0 <= args.start <= args.stop <= MAX_INDEX:
        raise UsageError(f"need 0 <= from <= to <= {MAX_INDEX}")
    gen = SEQUENCES[args.seq]
    records = [
        {"m": m, "value": _render(gen(m), args.mode, args.digits)}
        for m in range(args.start, args.stop + 1)
    ]
    command = {"name": "coeffs", "seq": args.seq, "from": args.start, "to": args.stop,
               "mode": args.mode, "digits": args.digits}
    _emit(command, records, args.format, out)
    return 0


def _pair_for(target: str, order: int) -> BoundPair:
    internal = TARGETS[target]
    if order < MIN_ORDER[internal]:
        raise UsageError(f"order for {target} must be >= {MIN_ORDER[internal]}")
    return build_pair(internal, order)


def cmd_bounds(args, out) -> int:
    pair = _pair_for(args.target, args.order)
    records = []
    for bound in (pair.lower, pair.upper):
        for degree, coeff in bound.terms:
            records.append({
                "side": bound.side,
                "degree": degree,
                "coeff": _render(coeff, args.mode, args.digits),
                "denominator": bound.denominator,
            })
    command = {"name": "bounds", "target": args.target, "order": args.order,
               "mode": args.mode, "digits": args.digits,
               "domain": ["0", format_exact(pair.domain_end)]}
    _emit(command, records, args.format, out)
    return 0


def cmd_verify(args, out) -> int:
    if args.grid < 2:
        raise UsageError("grid must be ≥ 2")
    if args.prec < 32:
        raise UsageError("prec must be >= 32")
    pair = _pair_for(args.target, args.order)
    if args.escalate:
        report = verify_escalating(pair, args.grid, args.prec)
    else:
        report = verify_pair(pair, args.grid, args.prec)
    record = report.to_dict()
    record["target"] = args.target
    command = {"name": "verify", "target": args.target, "order": args.order,
               "grid": args.grid, "prec": args.prec}
    _emit(command, [record], args.format, out)
    return EXIT_CODES[report.status]


def cmd_table(args, out) -> int:
    lo, hi = _parse_range(args.orders)
    if lo < 3 or hi < lo:
        raise UsageError("orders must satisfy 3 <= from <= to")
    if args.target != "wilker":
        raise UsageError("only the wilker target has an error table")
    rows = wilker_error_table(range(lo, hi + 1), args.prec)
    records = [{"m": r.m, "sup_gap": decimal_string(r.sup_gap, args.digits)} for r in rows]
    command = {"name": "table", "target": args.target, "orders": f"{lo}..{hi}",
               "prec": args.prec, "digits": args.digits}
    _emit(command, records, args.format, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wdbounds", description="Certified polynomial bounds for Wilker and Shafer-Fink type inequalities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, digits=12):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--digits", type=int, default=digits, help="significant digits in decimal output")

    p = sub.add_parser("coeffs", help="coefficient sequences c, D_3, D_pi, E")
    p.add_argument("--seq", choices=tuple(SEQUENCES), required=True)
    p.add_argument("--from", dest="start", type=int, default=0)
    p.add_argument("--to", dest="stop", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "decimal"), default="exact")
    common(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("bounds", help="lower/upper polynomial bounds")
    p.add_argument("--target", choices=tuple(TARGETS), required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "decimal"), default="exact")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="grid verification of a bound pair")
    p.add_argument("--target", choices=tuple(TARGETS), required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--grid", type=int, default=10000)
    p.add_argument("--prec", type=int, default=256)
    p.add_argument("--escalate", action="store_true", help="double precision while indeterminate")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="sup of the Wilker gap per order")
    p.add_argument("--target", choices=("wilker",), default="wilker")
    p.add_argument("--orders", default="3..6")
    p.add_argument("--prec", type=int, default=256)
    common(p, digits=6)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "digits", 1) < 1:
            raise UsageError("digits must be >= 1")
        return args.func(args, out)
    except UsageError as exc:
        err.write(json.dumps({"error": str(exc), "exit_code": 2}, ensure_ascii=False) + "\n")
        return 2
    except WDBoundsError as exc:
        err.write(json.dumps({"error": str(exc), "type": type(exc).__name__, "exit_code": 2}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
