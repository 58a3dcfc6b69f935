"""Command-line surface: count, jordan, partial-sum, identity, scan, witness,
zeta, report.

Configuration flags fall back to RFREE_-prefixed environment variables
(RFREE_PRECISION, RFREE_SIEVE_LIMIT, RFREE_ENUMERATION_BUDGET, RFREE_WORKERS,
RFREE_OUTPUT_FORMAT, RFREE_OUTPUT_PATH). Exit status is 0 iff every check in
the invocation passed; usage errors exit 2. Exact integers are always printed
in full decimal, never scientific notation.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from .arith import format_fraction, integer_root, sieve_mobius, zeta_value
from .errors import ResourceLimitError
from .jordan import TotientParams, jordan, jordan_oracle, partial_sum_bernoulli, partial_sum_direct
from .lattice import CountParams, CountRecord, count_oracle, count_record, decimal_places
from .omega import error_scan, certify_witness, omega_ratio_report, witness_large, witness_small
from .umbral import identity_check

CSV_COLUMNS = ["x", "V", "main_term", "error", "normalized_error", "density"]


@dataclass
class RunConfig:
    precision: Fraction = Fraction(1, 10**30)
    sieve_limit: int | None = None
    enumeration_budget: int = 10**8
    worker_count: int = 0  # 0 means available parallelism
    output_format: str = "csv"
    output_path: str | None = None

    def __post_init__(self) -> None:
        if self.precision <= 0:
            raise ValueError("precision must be positive")
        if self.enumeration_budget < 1:
            raise ValueError("enumeration budget must be positive")

    @property
    def places(self) -> int:
        return decimal_places(self.precision)

    @property
    def workers(self) -> int:
        if self.worker_count > 0:
            return self.worker_count
        return os.cpu_count() or 1


def _env(name: str, default):
    return os.environ.get(f"RFREE_{name}", default)


def _parse_precision(text: str) -> Fraction:
    try:
        value = Fraction(Decimal(text))
    except Exception as exc:
        raise argparse.ArgumentTypeError(f"bad precision {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("precision must be positive")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        precision=args.precision
        if args.precision is not None
        else _parse_precision(str(_env("PRECISION", "1e-30"))),
        sieve_limit=args.sieve_limit
        if getattr(args, "sieve_limit", None) is not None
        else (int(_env("SIEVE_LIMIT", 0)) or None),
        enumeration_budget=args.budget
        if getattr(args, "budget", None) is not None
        else int(_env("ENUMERATION_BUDGET", 10**8)),
        worker_count=args.workers
        if getattr(args, "workers", None) is not None
        else int(_env("WORKERS", 0)),
        output_format=args.format
        if getattr(args, "format", None) is not None
        else str(_env("OUTPUT_FORMAT", "csv")),
        output_path=args.output
        if getattr(args, "output", None) is not None
        else (_env("OUTPUT_PATH", None) or None),
    )


# ---------------------------------------------------------------------------
# Record rendering
# ---------------------------------------------------------------------------

def record_fields(rec: CountRecord, places: int) -> dict[str, str]:
    """The CSV/JSON projection of a record; exact integers as full-decimal
    strings, high-precision values with ``places`` fractional digits."""
    return {
        "x": str(rec.x),
        "V": str(rec.V),
        "main_term": format_fraction(rec.main_term.mid, places),
        "error": format_fraction(rec.error.mid, places),
        "normalized_error": str(rec.normalized_error),
        "density": format_fraction(rec.density, places),
    }


def records_to_csv(records, places: int, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        fields = record_fields(rec, places)
        writer.writerow([fields[c] for c in CSV_COLUMNS])


def records_to_json(records, places: int, out) -> None:
    import json

    out.write(json.dumps([record_fields(r, places) for r in records], indent=2))
    out.write("\n")


@dataclass(frozen=True)
class ScanRow:
    """A parsed scan row; numeric fields as exact ints and Decimals."""

    x: int
    V: int
    main_term: Decimal
    error: Decimal
    normalized_error: Decimal
    density: Decimal


def parse_scan_csv(lines) -> list[ScanRow]:
    reader = csv.reader(lines)
    header = next(reader, None)
    if header != CSV_COLUMNS:
        raise ValueError(f"unexpected scan header {header!r}")
    rows = []
    for row in reader:
        if not row:
            continue
        rows.append(
            ScanRow(
                x=int(row[0]),
                V=int(row[1]),
                main_term=Decimal(row[2]),
                error=Decimal(row[3]),
                normalized_error=Decimal(row[4]),
                density=Decimal(row[5]),
            )
        )
    return rows


class ResourceWriteError(RuntimeError):
    pass


def _open_output(path: str | None):
    if path is None:
        return sys.stdout, False
    try:
        return open(path, "w", encoding="utf-8"), True
    except OSError as exc:
        raise ResourceWriteError(f"cannot write {path}: {exc}") from exc


def _frac_sci(q: Fraction, sig: int = 6) -> str:
    if q == 0:
        return "0"
    return f"{float(q):.{sig}e}"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_count(args) -> int:
    cfg = config_from_args(args)
    params = CountParams(r=args.r, k=args.k, x=args.x)
    table = sieve_mobius(
        max(integer_root(args.x, args.r), 1, cfg.sieve_limit or 1)
    )
    rec = count_record(params, cfg.precision, table=table)
    fields = record_fields(rec, cfg.places)
    status = 0
    lines = [f"r={args.r} k={args.k} x={args.x}"]
    lines += [f"{name} = {fields[name]}" for name in CSV_COLUMNS[1:]]
    oracle = None
    if args.oracle:
        try:
            oracle = count_oracle(params, budget=cfg.enumeration_budget)
        except ResourceLimitError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        agree = oracle == rec.V
        lines.append(f"oracle = {oracle}")
        lines.append(f"agreement = {'true' if agree else 'false'}")
        if not agree:
            status = 1
    if cfg.output_format == "json" or args.format == "json":
        records_to_json([rec], cfg.places, sys.stdout)
    elif args.format == "csv":
        records_to_csv([rec], cfg.places, sys.stdout)
    else:
        print("\n".join(lines))
    return status


def _cmd_jordan(args) -> int:
    cfg = config_from_args(args)
    params = TotientParams(r=args.r, k=args.k)
    value = jordan(args.n, params)
    print(f"J(r={args.r}, k={args.k}, n={args.n}) = {value}")
    if args.oracle:
        try:
            oracle = jordan_oracle(args.n, params, budget=cfg.enumeration_budget)
        except ResourceLimitError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        agree = oracle == value
        print(f"oracle = {oracle}")
        print(f"agreement = {'true' if agree else 'false'}")
        if not agree:
            return 1
    return 0


def _cmd_partial_sum(args) -> int:
    params = TotientParams(r=args.r, k=args.k)
    method = args.method
    values = {}
    if method in ("direct", "both"):
        values["direct"] = partial_sum_direct(args.x, params)
    if method in ("bernoulli", "both"):
        table = sieve_mobius(max(integer_root(args.x, args.r), 1))
        values["bernoulli"] = partial_sum_bernoulli(args.x, params, table)
    for name, value in values.items():
        print(f"{name} = {value}")
    if len(values) == 2:
        agree = values["direct"] == values["bernoulli"]
        print(f"agreement = {'true' if agree else 'false'}")
        if not agree:
            return 1
    return 0


def _cmd_identity(args) -> int:
    table = sieve_mobius(max(integer_root(args.x_max, args.r), 1))
    mismatches = 0
    for x in range(args.x_min, args.x_max + 1):
        check = identity_check(args.r, args.k, x, table=table)
        if check.equal:
            print(f"x={x} equal")
        else:
            mismatches += 1
            print(
                f"x={x} MISMATCH umbral={check.umbral} fast={check.fast}"
                + (f" zero_split={check.zero_split}" if check.zero_split is not None else "")
            )
    print(f"checked {args.x_max - args.x_min + 1} values, {mismatches} mismatches")
    return 1 if mismatches else 0


def _cmd_scan(args, parser: argparse.ArgumentParser) -> int:
    cfg = config_from_args(args)
    if args.x_min > args.x_max:
        parser.error("--x-min must not exceed --x-max")
    records = error_scan(
        args.r,
        args.k,
        args.x_min,
        args.x_max,
        step=args.step,
        precision=cfg.precision,
        workers=cfg.workers,
        sieve_limit=cfg.sieve_limit,
    )
    try:
        out, close = _open_output(cfg.output_path)
    except ResourceWriteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if cfg.output_format == "json":
            records_to_json(records, cfg.places, out)
        else:
            records_to_csv(records, cfg.places, out)
    finally:
        if close:
            out.close()
    return 0


def _cmd_witness(args, parser: argparse.ArgumentParser) -> int:
    if args.large == args.small:
        parser.error("choose exactly one of --large / --small")
    reports = []
    if args.large:
        if args.r is None or args.k is None:
            parser.error("--large requires --r and --k")
        if args.r < 2 or args.r * args.k < 4:
            parser.error(
                "--large applies to r >= 2 with r*k >= 4 "
                "(use --small for the (r, k) = (2, 1) and (3, 1) cases)"
            )
        for x in witness_large(args.r, args.k, args.count):
            reports.append(certify_witness(x, args.r, args.k, cutoff=args.cutoff))
    else:
        if args.r is None or args.m is None:
            parser.error("--small requires --r and --m")
        if args.r not in (2, 3):
            parser.error("--small applies to r in {2, 3} with k = 1")
        try:
            x = witness_small(args.r, args.m)
        except ValueError as exc:
            parser.error(str(exc))
        reports.append(certify_witness(x, args.r, 1, cutoff=args.cutoff or 100))
    status = 0
    for rep in reports:
        print(f"x = {rep.x}")
        print(f"finite_part = {rep.finite_part} ({_frac_sci(rep.finite_part)})")
        print(f"tail_bound = {rep.tail_bound} ({_frac_sci(rep.tail_bound)})")
        print(f"upper_bound = {rep.upper_bound} ({_frac_sci(rep.upper_bound)})")
        print(f"verdict = {rep.verdict}")
        if rep.target_bound is not None:
            print(
                f"target_bound = {rep.target_bound} ({_frac_sci(rep.target_bound)})"
                f" met = {'true' if rep.upper_bound < rep.target_bound else 'false'}"
            )
        if not rep.negative:
            status = 1
    return status


def _cmd_zeta(args) -> int:
    cfg = config_from_args(args)
    z = zeta_value(args.s, cfg.precision)
    print(f"zeta({args.s}) = {format_fraction(z.value, cfg.places)}")
    print(f"error_radius <= {_frac_sci(z.error_radius)}")
    print(f"depth = {z.depth}")
    return 0


def _cmd_report(args) -> int:
    if args.input:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                rows = parse_scan_csv(fh)
        except OSError as exc:
            print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
            return 1
    else:
        rows = parse_scan_csv(sys.stdin)
    try:
        report = omega_ratio_report(rows, args.split)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"split = {report.split}")
    print(f"max_early = {report.max_early}")
    print(f"max_late = {report.max_late}")
    print(f"ratio = {report.ratio}")
    if args.min_ratio is not None and report.ratio < Decimal(str(args.min_ratio)):
        print(f"ratio below threshold {args.min_ratio}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--precision", type=_parse_precision, default=None,
                     help="zeta enclosure target (default 1e-30, env RFREE_PRECISION)")
    sub.add_argument("--sieve-limit", type=_pos_int, default=None)
    sub.add_argument("--budget", type=_pos_int, default=None,
                     help="enumeration budget in tuples (env RFREE_ENUMERATION_BUDGET)")
    sub.add_argument("--workers", type=_pos_int, default=None,
                     help="parallel workers for scans (env RFREE_WORKERS)")
    sub.add_argument("--format", choices=("text", "csv", "json"), default=None)
    sub.add_argument("--output", default=None, help="write output to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rfree",
        description="Exact counts of relatively r-prime k-tuples, generalized "
        "Jordan totients, and error-term diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="V, main term, and error at one (r, k, x)")
    p.add_argument("--r", type=_pos_int, required=True)
    p.add_argument("--k", type=_pos_int, required=True)
    p.add_argument("--x", type=_nonneg_int, required=True)
    p.add_argument("--oracle", action="store_true",
                   help="also enumerate the box and check agreement")
    _add_common(p)

    p = sub.add_parser("jordan", help="generalized Jordan totient at one n")
    p.add_argument("--n", type=_pos_int, required=True)
    p.add_argument("--r", type=_pos_int, required=True)
    p.add_argument("--k", type=_nonneg_int, required=True)
    p.add_argument("--oracle", action="store_true")
    _add_common(p)

    p = sub.add_parser("partial-sum", help="sum of J_{k-1}^r(n) for n <= x")
    p.add_argument("--x", type=_nonneg_int, required=True)
    p.add_argument("--r", type=_pos_int, required=True)
    p.add_argument("--k", type=_pos_int, required=True)
    p.add_argument("--method", choices=("direct", "bernoulli", "both"), default="both")
    _add_common(p)

    p = sub.add_parser("identity", help="check the polynomial identity on 0..x_max")
    p.add_argument("--r", type=_pos_int, required=True)
    p.add_argument("--k", type=_pos_int, required=True)
    p.add_argument("--x-max", dest="x_max", type=_nonneg_int, required=True)
    p.add_argument("--x-min", dest="x_min", type=_nonneg_int, default=0)
    _add_common(p)

    p = sub.add_parser("scan", help="CountRecord stream over an x range")
    p.add_argument("--r", type=_pos_int, required=True)
    p.add_argument("--k", type=_pos_int, required=True)
    p.add_argument("--x-min", dest="x_min", type=_pos_int, required=True)
    p.add_argument("--x-max", dest="x_max", type=_pos_int, required=True)
    p.add_argument("--step", type=_pos_int, default=1)
    _add_common(p)

    p = sub.add_parser("witness", help="certified negativity at constructed witnesses")
    p.add_argument("--large", action="store_true", help="r >= 2, r*k >= 4 branch")
    p.add_argument("--small", action="store_true", help="(r, k) in {(2,1), (3,1)} branch")
    p.add_argument("--r", type=_pos_int)
    p.add_argument("--k", type=_pos_int)
    p.add_argument("--m", type=_pos_int)
    p.add_argument("--count", type=_pos_int, default=5)
    p.add_argument("--cutoff", type=_pos_int, default=None,
                   help="truncation cutoff D (default: exact for --large, 100 for --small)")
    _add_common(p)

    p = sub.add_parser("zeta", help="zeta(s) with rigorous error radius")
    p.add_argument("--s", type=_pos_int, required=True)
    _add_common(p)

    p = sub.add_parser("report", help="two-window non-decay ratio from a scan CSV")
    p.add_argument("--split", type=_pos_int, required=True)
    p.add_argument("--input", default=None, help="scan CSV path (default: stdin)")
    p.add_argument("--min-ratio", dest="min_ratio", type=float, default=None)
    _add_common(p)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "count":
            return _cmd_count(args)
        if args.command == "jordan":
            return _cmd_jordan(args)
        if args.command == "partial-sum":
            return _cmd_partial_sum(args)
        if args.command == "identity":
            return _cmd_identity(args)
        if args.command == "scan":
            return _cmd_scan(args, parser)
        if args.command == "witness":
            return _cmd_witness(args, parser)
        if args.command == "zeta":
            return _cmd_zeta(args)
        if args.command == "report":
            return _cmd_report(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
