"""Command-line interface: ``annulus {diff,homology,table,verify}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import groupby
from typing import Sequence

from .complex_open import diff
from .diagrams import Complex, HalfInt
from .homology import HomologyReport, InvalidSpec, TruncationSpec, homology_dim, mark_stable
from .parsing import ParseError, parse_element
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FIELDS = (
    "complex",
    "winding",
    "max_weight",
    "dim_space",
    "dim_kernel",
    "dim_image",
    "dim_homology",
    "predicted",
    "stable",
)


class UsageError(Exception):
    pass


def parse_half(text: str) -> HalfInt:
    try:
        return HalfInt.parse(text)
    except ValueError:
        raise UsageError(f"not a number or n/2 literal: {text!r}") from None


def parse_range(text: str) -> list[HalfInt]:
    """``P``, ``P/2`` or an inclusive range ``A..B`` stepping by 1."""
    if ".." not in text:
        return [parse_half(text)]
    lo_text, hi_text = text.split("..", 1)
    lo, hi = parse_half(lo_text), parse_half(hi_text)
    if (hi.doubled - lo.doubled) % 2:
        raise UsageError(f"range {text!r} does not step evenly by 1")
    return [HalfInt(d) for d in range(lo.doubled, hi.doubled + 1, 2)]


def _json_half(h: HalfInt) -> int | str:
    return h.doubled // 2 if h.is_integer else str(h)


def report_record(r: HomologyReport, stable: bool) -> dict:
    return {
        "complex": r.spec.complex.value,
        "winding": _json_half(r.spec.winding),
        "max_weight": _json_half(r.spec.max_weight),
        "dim_space": r.dim_space,
        "dim_kernel": r.dim_kernel,
        "dim_image": r.dim_image,
        "dim_homology": r.dim_homology,
        "predicted": r.predicted,
        "stable": stable,
    }


def _summand_arg(complex: Complex, summand: str | None) -> str | None:
    if summand is None:
        return None
    if complex is Complex.F02:
        if summand in ("a+", "a-"):
            return summand
        raise UsageError("F02 accepts --summand a+ or a-")
    return summand


def build_specs(args: argparse.Namespace) -> list[TruncationSpec]:
    cx = Complex.parse(args.complex)
    windings = parse_range(args.winding)
    weights = parse_range(args.max_weight)
    cap = parse_half(args.max_a_degree) if args.max_a_degree else None
    summand = _summand_arg(cx, args.summand)
    try:
        return [TruncationSpec(cx, w, m, summand, cap) for w in windings for m in weights]
    except (InvalidSpec, ValueError) as exc:
        raise UsageError(str(exc)) from None


def compute_reports(specs: Sequence[TruncationSpec], jobs: int) -> list[HomologyReport]:
    if jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(homology_dim, specs))
    else:
        reports = [homology_dim(s) for s in specs]
    return sorted(reports, key=lambda r: r.spec.key())


def records(reports: Sequence[HomologyReport]) -> list[dict]:
    out = []
    for _, group in groupby(reports, key=lambda r: r.spec.winding.doubled):
        rows = list(group)
        for r, stable in zip(rows, mark_stable(rows)):
            out.append(report_record(r, stable))
    return out


def _csv_cell(value) -> object:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return value


def _text_cell(value) -> str:
    if value is None:
        return "-"
    cell = _csv_cell(value)
    return str(cell)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row[k]) for k in FIELDS})
        return buf.getvalue().rstrip("\n")
    table = [list(FIELDS)] + [[_text_cell(row[k]) for k in FIELDS] for row in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(FIELDS))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(line, widths)) for line in table)


def cmd_diff(args: argparse.Namespace) -> int:
    e = parse_element(args.expr, args.complex)
    print(diff(e))
    return EXIT_OK


def cmd_homology(args: argparse.Namespace) -> int:
    reports = compute_reports(build_specs(args), args.jobs)
    print(render(records(reports), args.format))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    checks = run_suite(args.suite, args.max_weight)
    failed = 0
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        failed += not c.passed
        print(f"{status}  {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    print(f"{len(checks) - failed} passed, {failed} failed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def _complex_choice(text: str) -> str:
    if text.lower() not in ("f00", "f11", "f02", "f22"):
        raise argparse.ArgumentTypeError(f"invalid complex {text!r}")
    return text.upper()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="annulus", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diff", help="apply the differential to an element")
    p.add_argument("--complex", required=True, type=_complex_choice)
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_diff)

    for name in ("homology", "table"):
        p = sub.add_parser(name, help="homology dimensions of weight windows")
        p.add_argument("--complex", required=True, type=_complex_choice)
        p.add_argument("--winding", required=True)
        p.add_argument("--max-weight", required=True)
        p.add_argument("--summand", choices=["a+b+", "a+b-", "a-b+", "a-b-", "cd", "a+", "a-"])
        p.add_argument("--max-a-degree")
        p.add_argument("--format", choices=["json", "csv", "text"], default="text")
        p.add_argument("--jobs", type=int, default=1)
        p.set_defaults(func=cmd_homology)

    p = sub.add_parser("verify", help="run an identity suite")
    p.add_argument("--suite", required=True, choices=[*SUITES, "all"])
    p.add_argument("--max-weight", type=int)
    p.set_defaults(func=cmd_verify)
    return parser


_NUMERIC_FLAGS = ("--winding", "--max-weight", "--max-a-degree")


def _attach_numeric_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--winding -1..1`` as ``--winding=-1..1``.

    argparse takes a leading ``-`` followed by anything but a plain number
    for an option flag, so negative ranges would otherwise be rejected.
    """
    out: list[str] = []
    it = iter(argv)
    for token in it:
        if token in _NUMERIC_FLAGS:
            value = next(it, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_attach_numeric_values(sys.argv[1:] if argv is None else argv))
    try:
        return args.func(args)
    except (ParseError, UsageError, InvalidSpec) as exc:
        print(f"annulus {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
