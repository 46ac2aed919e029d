"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 internal assertion failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import FIG_GRID, BenchmarkError, report_to_csv, report_to_svg, run_bench
from .corpus import CorpusSpec, generate
from .fitting import FitCounter
from .formats import ParseError, encode_output, ingest, to_svg, write_polyline_csv
from .oracle import oracle_compress, random_instances
from .reach import compute_tables, loosest_tables
from .solver import (
    PenaltyConfig,
    SolverError,
    dp_compress,
    jump_compress,
    verify_within_tolerance,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyarc",
        description="Compress a polyline into the minimum-penalty chain of "
        "straight segments and circular arcs within a tolerance.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="compress a polyline from a file")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "geojson"], default="csv")
    p.add_argument("--tolerance", type=float, required=True)
    p.add_argument("--penalty-seg", type=int, default=2)
    p.add_argument("--penalty-arc", type=int, default=3)
    p.add_argument("--min-arc-vertices", type=int, default=4)
    p.add_argument("--algorithm", choices=["jump", "dp"], default="jump")
    p.add_argument("--loose-tables", action="store_true",
                   help="run the jump solver with trivially loose reach tables")
    p.add_argument("--monotone-arc-check", choices=["on", "off"], default="on")
    p.add_argument("--output", required=True)
    p.add_argument("--svg", default=None)
    p.add_argument("--stats", action="store_true", help="print fit-call statistics")
    p.add_argument("--trace", action="store_true",
                   help="log one line per penalty level to stderr")
    p.add_argument("--dump-tables", default=None,
                   help="write the reach tables to a CSV file")

    p = sub.add_parser("generate", help="write a synthetic corpus polyline")
    p.add_argument("kind", choices=["arcs", "zigzag"])
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", required=True)

    p = sub.add_parser("bench", help="time both solvers over a corpus size grid")
    p.add_argument("kind", choices=["arcs", "zigzag"])
    p.add_argument("--sizes", default=",".join(str(s) for s in FIG_GRID),
                   help="comma-separated points-per-primitive grid")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--tolerance", type=float, default=0.06)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--csv", required=True)
    p.add_argument("--svg", default=None)

    p = sub.add_parser("verify", help="cross-check both solvers against the oracle")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--tolerance", type=float, default=0.2)
    return parser


def _cmd_compress(args) -> int:
    poly = ingest(args.input, args.format)
    cfg = PenaltyConfig(args.penalty_seg, args.penalty_arc, args.min_arc_vertices)
    monotone = args.monotone_arc_check == "on"
    ctx = FitCounter(poly.n)
    trace = [] if args.trace else None
    if args.algorithm == "dp":
        result = dp_compress(poly, args.tolerance, cfg, ctx=ctx, monotone=monotone)
    else:
        tables = loosest_tables(poly) if args.loose_tables else compute_tables(poly, args.tolerance)
        if args.dump_tables:
            _dump_tables(tables, args.dump_tables)
        result = jump_compress(
            poly, args.tolerance, cfg, tables=tables, ctx=ctx,
            monotone=monotone, trace=trace,
        )
    if args.algorithm == "dp" and args.dump_tables:
        _dump_tables(compute_tables(poly, args.tolerance), args.dump_tables)
    verify_within_tolerance(poly, result, args.tolerance)
    doc = encode_output(result, poly)
    Path(args.output).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    if args.svg:
        Path(args.svg).write_text(to_svg(poly, result), encoding="utf-8")
    if trace is not None:
        for rec in trace:
            print(
                f"level={rec.level} jump_target={rec.jump_target} "
                f"retries={rec.retries} solve_calls={rec.solve_calls}",
                file=sys.stderr,
            )
    if args.stats:
        seg, arc, dup = ctx.totals()
        print(
            f"segment_fits={seg} arc_fits={arc} duplicate_pairs={dup} "
            f"penalty={result.total_penalty} sse={result.total_sse!r} "
            f"primitives={len(result.primitives)}",
            file=sys.stderr,
        )
    return 0


def _dump_tables(tables, path) -> None:
    lines = ["vertex,fw_seg,fw_arc,bw_seg,bw_arc"]
    for i in range(tables.n):
        lines.append(
            f"{i},{tables.fw_seg[i]},{tables.fw_arc[i]},{tables.bw_seg[i]},{tables.bw_arc[i]}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _cmd_generate(args) -> int:
    spec = CorpusSpec(args.kind, count=args.count, scale=args.scale,
                      points_per_primitive=args.points, noise=args.noise, seed=args.seed)
    write_polyline_csv(generate(spec), args.output)
    return 0


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    rows = run_bench(
        args.kind, sizes, repeats=args.repeats, tol=args.tolerance,
        count=args.count, noise=args.noise, seed=args.seed,
    )
    report_to_csv(rows, args.csv)
    if args.svg:
        report_to_svg(rows, args.svg)
    for row in rows:
        print(
            f"{args.kind} size={row.points_per_primitive} {row.algorithm}: "
            f"{row.mean_seconds:.4f}s penalty={row.total_penalty} fits={row.fit_call_count}"
        )
    return 0


def _cmd_verify(args) -> int:
    polys = random_instances(args.seed, args.count, (6, 22), "mixed")
    bad = 0
    for idx, poly in enumerate(polys):
        dp = dp_compress(poly, args.tolerance)
        jp = jump_compress(poly, args.tolerance)
        oc = oracle_compress(poly, args.tolerance)
        ok = (
            dp.total_penalty == jp.total_penalty == oc.penalty
            and abs(dp.total_sse - jp.total_sse) <= 1e-9 * max(1.0, dp.total_sse)
            and abs(dp.total_sse - oc.sse) <= 1e-6 * max(1.0, oc.sse)
        )
        status = "ok" if ok else "MISMATCH"
        print(
            f"instance {idx}: n={poly.n} dp=({dp.total_penalty},{dp.total_sse:.6g}) "
            f"jump=({jp.total_penalty},{jp.total_sse:.6g}) "
            f"oracle=({oc.penalty},{oc.sse:.6g}) {status}"
        )
        if not ok:
            bad += 1
    if bad:
        raise SolverError(f"{bad} of {len(polys)} instances disagree with the oracle")
    print(f"all {len(polys)} instances agree")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "compress":
            return _cmd_compress(args)
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "verify":
            return _cmd_verify(args)
        raise AssertionError(f"unhandled command {args.command}")
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SolverError, BenchmarkError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
