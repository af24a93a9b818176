"""Command-line front end: ``generate``, ``count``, ``verify``, ``report``.

Exit codes: 0 success/pass, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

from . import families, formulas
from .grid import DEFAULT_SEED, load_grid, save_grid
from .repetitions import (
    DEFAULT_ORACLE_CAP,
    OracleCapExceeded,
    count_distinct_quartics,
    count_distinct_quartics_naive,
    count_distinct_tandems,
    count_distinct_tandems_naive,
    enumerate_runs,
    enumerate_runs_naive,
)
from .verify import measure, verify_family

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COUNT_KEYS = ("family", "dims", "tandems_h", "tandems_v", "quartics", "runs", "elapsed_ms")
REPORT_COLUMNS = ("level", "n", "predicted", "measured", "ratio")
REPORT_MAX_LEVEL = 10


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--mode", choices=("oracle", "fast"), default="fast",
                   help="detector implementation (default: fast)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="fingerprint / sampling seed")
    p.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP,
                   help=f"cell cap for oracle runs and full counts (default {DEFAULT_ORACLE_CAP})")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="reps2d", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", parents=[common], help="write a family grid")
    gen.add_argument("kind", choices=families.KINDS)
    gen.add_argument("level", type=int)
    gen.add_argument("--format", choices=("text", "pbm"), default=None,
                     help="grid format (default: pbm for binary grids, else text)")
    gen.add_argument("-o", "--out", default="-", help="output path ('-' for stdout)")
    gen.add_argument("--witnesses", metavar="PATH", help="also write the witness rectangles")
    gen.add_argument("--id-bits", type=int, default=None, help="tandem row-label width")

    cnt = sub.add_parser("count", parents=[common], help="count repetitions in a grid file")
    cnt.add_argument("repetition", choices=("tandems", "quartics", "runs", "all"))
    cnt.add_argument("grid", help="grid file (text or PBM, sniffed)")
    cnt.add_argument("--format", choices=("text", "json"), default="text")
    cnt.add_argument("--family", default=None, help="label echoed in the JSON output")

    ver = sub.add_parser("verify", parents=[common], help="verify a family against its predictions")
    ver.add_argument("kind", choices=families.KINDS)
    ver.add_argument("level", type=int)
    full = ver.add_mutually_exclusive_group()
    full.add_argument("--full-count", dest="full_count", action="store_true", default=None)
    full.add_argument("--no-full-count", dest="full_count", action="store_false")
    ver.add_argument("--offset-samples", type=int, default=500)
    ver.add_argument("--id-bits", type=int, default=None)

    rep = sub.add_parser("report", parents=[common], help="CSV of predicted (and measured) counts")
    rep.add_argument("kind", choices=families.KINDS)
    rep.add_argument("--levels", default="1-6", help="range like 1-6 or 2..4")
    rep.add_argument("--measure", action="store_true", help="fill 'measured' where the grid is within --cap")
    rep.add_argument("--format", choices=("csv",), default="csv")
    return parser


def _write(path: str, data: bytes):
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        try:
            Path(path).write_bytes(data)
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc}") from exc


def cmd_generate(args) -> int:
    if args.kind == "tandem":
        g = families.tandem_family(args.level, args.id_bits)
    else:
        g = families.generate(args.kind, args.level)
    fmt = args.format or ("pbm" if g.is_binary else "text")
    _write(args.out, save_grid(g, fmt))
    if args.witnesses:
        ws = (families.tandem_witnesses(args.level, args.id_bits) if args.kind == "tandem"
              else families.witnesses(args.kind, args.level))
        _write(args.witnesses, ws.to_text().encode("ascii"))
    stream = sys.stderr if args.out == "-" else sys.stdout
    print(f"{args.kind} level {args.level}: {g.rows}x{g.cols}, alphabet {g.alphabet}, format {fmt}", file=stream)
    return EXIT_OK


def count_grid(g, repetition: str, mode: str = "fast", cap: int | None = None,
               seed: int | None = None, family: str | None = None) -> dict:
    start = time.perf_counter()
    out = dict.fromkeys(COUNT_KEYS)
    out["family"] = family
    out["dims"] = [g.rows, g.cols]
    oracle = mode == "oracle"
    if repetition in ("tandems", "all"):
        tc = count_distinct_tandems_naive(g, cap) if oracle else count_distinct_tandems(g, seed)
        out["tandems_h"], out["tandems_v"] = tc.horizontal, tc.vertical
    if repetition in ("quartics", "all"):
        out["quartics"] = count_distinct_quartics_naive(g, cap) if oracle else count_distinct_quartics(g, seed)
    if repetition in ("runs", "all"):
        out["runs"] = len(enumerate_runs_naive(g, cap) if oracle else enumerate_runs(g))
    out["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 1)
    return out


def cmd_count(args) -> int:
    try:
        data = Path(args.grid).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {args.grid}: {exc}") from exc
    g = load_grid(data)
    result = count_grid(g, args.repetition, args.mode, args.cap, args.seed, args.family)
    if args.format == "text":
        for key in ("tandems_h", "tandems_v", "quartics", "runs"):
            if result[key] is not None:
                print(f"{key}: {result[key]}")
    print(json.dumps(result))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify_family(args.kind, args.level, args.mode, args.cap, args.seed,
                           args.full_count, args.offset_samples, args.id_bits)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.verdict == "pass" else EXIT_FAIL


def parse_levels(spec: str) -> range:
    for sep in ("..", "-"):
        if sep in spec:
            lo, hi = spec.split(sep, 1)
            break
    else:
        lo = hi = spec
    try:
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"bad level range {spec!r}") from None
    if lo < 1 or hi < lo or hi > REPORT_MAX_LEVEL:
        raise UsageError(f"level range must lie within 1..{REPORT_MAX_LEVEL}, got {spec!r}")
    return range(lo, hi + 1)


def report_rows(kind: str, levels, measure_counts: bool = False, mode: str = "fast",
                cap: int | None = None, seed: int | None = None) -> list[dict]:
    cap = DEFAULT_ORACLE_CAP if cap is None else cap
    rows = []
    for lv in levels:
        if kind == "quartic_binary" and lv < 2:
            continue
        predicted = formulas.predicted_total(kind, lv)
        if kind == "tandem":
            n = formulas.tandem_size(lv)
            ratio = predicted / n ** 3
        else:
            n = (formulas.binary_quartic_counts(lv).n_prime if kind == "quartic_binary"
                 else formulas.quartic_size(lv) if kind == "quartic" else formulas.run_size(lv))
            ratio = predicted / (n * n * math.log2(n)) if n > 1 else float("nan")
        measured = ""
        if measure_counts and n * n <= cap:
            m = measure(kind, families.generate(kind, lv), mode, cap, seed)
            measured = m.get("tandems_h", m.get("quartics", m.get("runs")))
        rows.append({"level": lv, "n": n, "predicted": predicted, "measured": measured,
                     "ratio": f"{ratio:.6g}"})
    return rows


def cmd_report(args) -> int:
    rows = report_rows(args.kind, parse_levels(args.levels), args.measure, args.mode, args.cap, args.seed)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "count": cmd_count, "verify": cmd_verify, "report": cmd_report}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OracleCapExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
