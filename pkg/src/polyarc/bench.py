"""Wall-clock comparison of the two solvers over synthetic corpora.

For each corpus size, both solvers run on the same polyline and must agree
on (penalty, sse); a disagreement aborts the benchmark.  The baseline is
timed end to end (it builds the backward tables it needs internally); the
jump solver's mean includes the one-off construction of the full reach
tables, since those are part of its method.  Timing is single-threaded.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

from .corpus import CorpusSpec, generate
from .fitting import FitCounter
from .reach import compute_tables
from .solver import dp_compress, jump_compress, PenaltyConfig

# size grid used by the timing figures (points per primitive)
FIG_GRID = [8, 10, 11, 13, 16, 19, 23, 27, 32, 38, 45, 54, 64, 76, 91, 108, 128, 152, 181, 215, 256]


class BenchmarkError(RuntimeError):
    pass


@dataclass(frozen=True)
class BenchRow:
    points_per_primitive: int
    algorithm: str
    mean_seconds: float
    repeats: int
    total_penalty: int
    total_sse: float
    fit_call_count: int


def run_bench(
    corpus_kind: str,
    sizes: list[int],
    repeats: int = 5,
    tol: float = 0.06,
    count: int = 100,
    noise: float = 0.05,
    seed: int = 42,
    scale: float = 1.0,
    cfg: PenaltyConfig | None = None,
) -> list[BenchRow]:
    if not sizes:
        raise ValueError("sizes must be nonempty")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    cfg = cfg or PenaltyConfig()
    rows: list[BenchRow] = []
    for size in sizes:
        spec = CorpusSpec(corpus_kind, count=count, scale=scale,
                          points_per_primitive=size, noise=noise, seed=seed)
        poly = generate(spec)
        n = poly.n

        dp_times = []
        dp_res = None
        dp_calls = 0
        for _ in range(repeats):
            ctx = FitCounter(n, track_duplicates=False)
            t0 = time.perf_counter()
            dp_res = dp_compress(poly, tol, cfg, ctx=ctx)
            dp_times.append(time.perf_counter() - t0)
            dp_calls = ctx.segment_fits + ctx.arc_fits

        t0 = time.perf_counter()
        tables = compute_tables(poly, tol)
        t_tables = time.perf_counter() - t0
        jp_times = []
        jp_res = None
        jp_calls = 0
        for _ in range(repeats):
            ctx = FitCounter(n, track_duplicates=False)
            t0 = time.perf_counter()
            jp_res = jump_compress(poly, tol, cfg, tables=tables, ctx=ctx)
            jp_times.append(time.perf_counter() - t0)
            jp_calls = ctx.segment_fits + ctx.arc_fits

        assert dp_res is not None and jp_res is not None
        if jp_res.total_penalty != dp_res.total_penalty or abs(
            jp_res.total_sse - dp_res.total_sse
        ) > 1e-9 * max(1.0, abs(dp_res.total_sse)):
            raise BenchmarkError(
                f"solver disagreement on {corpus_kind} size={size} n={n}: "
                f"dp=(penalty {dp_res.total_penalty}, sse {dp_res.total_sse!r}) "
                f"jump=(penalty {jp_res.total_penalty}, sse {jp_res.total_sse!r})"
            )
        rows.append(
            BenchRow(size, "dp", sum(dp_times) / repeats, repeats,
                     dp_res.total_penalty, dp_res.total_sse, dp_calls)
        )
        rows.append(
            BenchRow(size, "jump", t_tables + sum(jp_times) / repeats, repeats,
                     jp_res.total_penalty, jp_res.total_sse, jp_calls)
        )
    return rows


def report_to_csv(rows: list[BenchRow], path: str | Path) -> None:
    header = "points_per_primitive,algorithm,mean_seconds,repeats,total_penalty,total_sse,fit_call_count"
    lines = [header]
    for r in rows:
        lines.append(
            f"{r.points_per_primitive},{r.algorithm},{r.mean_seconds!r},{r.repeats},"
            f"{r.total_penalty},{r.total_sse!r},{r.fit_call_count}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def report_to_svg(rows: list[BenchRow], path: str | Path, width: int = 640, height: int = 400) -> None:
    """Minimal line chart of mean seconds per size, one polyline per algorithm."""
    algos = {"dp": "#1f77b4", "jump": "#2ca02c"}
    xs = sorted({r.points_per_primitive for r in rows})
    t_max = max(r.mean_seconds for r in rows) or 1.0
    x_max = max(xs)
    pad = 45

    def px(size):
        return pad + (width - 2 * pad) * size / x_max

    def py(t):
        return height - pad - (height - 2 * pad) * t / t_max

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width // 2}" y="{height - 8}" font-size="12" text-anchor="middle">points per primitive</text>',
        f'<text x="14" y="{height // 2}" font-size="12" transform="rotate(-90 14 {height // 2})" '
        f'text-anchor="middle">mean seconds</text>',
    ]
    for algo, color in algos.items():
        series = sorted(
            (r.points_per_primitive, r.mean_seconds) for r in rows if r.algorithm == algo
        )
        if not series:
            continue
        pts = " ".join(f"{px(s):.1f},{py(t):.1f}" for s, t in series)
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        for s, t in series:
            parts.append(f'<circle cx="{px(s):.1f}" cy="{py(t):.1f}" r="3" fill="{color}"/>')
    parts.append(
        f'<text x="{width - pad}" y="{pad}" font-size="12" text-anchor="end" fill="#1f77b4">dp</text>'
    )
    parts.append(
        f'<text x="{width - pad}" y="{pad + 16}" font-size="12" text-anchor="end" fill="#2ca02c">jump</text>'
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts), encoding="utf-8")
