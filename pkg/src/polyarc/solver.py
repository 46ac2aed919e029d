"""Minimum-penalty polyline compression.

Two solvers with one contract: minimize the total primitive penalty, then
among minimum-penalty chains minimize the total sum of squared deviations.

``dp_compress`` is the dynamic-programming baseline: it settles every vertex
in order, scanning candidate starts back to the backward reach bounds.

``jump_compress`` avoids settling every vertex.  Penalty levels are
processed in increasing order; at each level the frontier jumps from the
last position of a cheaper level by the forward reach of one more primitive
(preferring the arc source on ties), and only the vertices actually needed
are solved, recursively, looking backward from the jump target.  Stale
frontier entries are repaired by decrement-only adjustment.  Reach bounds
may overestimate but never underestimate, so no optimal solution is
skipped; results match the baseline exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .fitting import FitCounter, fit_arc, fit_segment, set_last_run
from .geometry import (
    AnchoredArc,
    Polyline,
    Primitive,
    max_deviation,
    validate_tolerance,
)
from .reach import ReachTables, compute_bw, compute_tables

NEG_INF = -(1 << 60)

_ARC_RANK = 1
_SEG_RANK = 0


@dataclass(frozen=True)
class PenaltyConfig:
    """Primitive costs: natural numbers, arcs costlier than free."""

    p_seg: int = 2
    p_arc: int = 3
    min_arc_vertices: int = 4

    def __post_init__(self):
        if self.p_seg < 1 or self.p_arc < 1:
            raise ValueError("penalties must be natural numbers >= 1")
        if self.min_arc_vertices < 3:
            raise ValueError("arcs need at least 3 vertices")


class PlacedPrimitive(NamedTuple):
    prim: Primitive
    sse: float


@dataclass(frozen=True)
class CompressedPolyline:
    primitives: list[PlacedPrimitive]
    total_penalty: int
    total_sse: float

    def breakpoints(self) -> list[int]:
        out = [self.primitives[0].prim.start_idx]
        out.extend(p.prim.end_idx for p in self.primitives)
        return out


class SolverError(RuntimeError):
    """Internal consistency failure; indicates a bug, not bad input."""


def _reconstruct(
    pred: list, error_final: float, n: int, cfg: PenaltyConfig, expected_penalty: int
) -> CompressedPolyline:
    chain: list[PlacedPrimitive] = []
    idx = n - 1
    while idx > 0:
        entry = pred[idx]
        if entry is None:
            raise SolverError(f"broken predecessor chain at vertex {idx}")
        k, prim, prim_sse = entry
        chain.append(PlacedPrimitive(prim, prim_sse))
        idx = k
    chain.reverse()
    total_penalty = sum(
        cfg.p_arc if isinstance(p.prim, AnchoredArc) else cfg.p_seg for p in chain
    )
    if total_penalty != expected_penalty:
        raise SolverError(
            f"reconstructed penalty {total_penalty} != solved penalty {expected_penalty}"
        )
    total_sse = 0.0
    for p in chain:
        total_sse += p.sse
    if abs(total_sse - error_final) > 1e-12 * (1.0 + abs(error_final)):
        raise SolverError("reconstructed sse disagrees with solver state")
    return CompressedPolyline(chain, total_penalty, total_sse)


def _better(
    new_err: float, new_rank: int, new_k: int, cur_err: float, cur_rank: int, cur_k: int
) -> bool:
    """Tie-break shared by both solvers: sse, then segment over arc, then larger k."""
    if new_err != cur_err:
        return new_err < cur_err
    if new_rank != cur_rank:
        return new_rank < cur_rank
    return new_k > cur_k


def dp_compress(
    poly: Polyline,
    tol: float,
    cfg: PenaltyConfig | None = None,
    tables: ReachTables | None = None,
    ctx: FitCounter | None = None,
    monotone: bool = True,
) -> CompressedPolyline:
    """Dynamic-programming baseline: settle each vertex from its best predecessor."""
    tol = validate_tolerance(tol)
    cfg = cfg or PenaltyConfig()
    n = poly.n
    if tables is not None:
        bw_seg, bw_arc = tables.bw_seg, tables.bw_arc
    else:
        bw_seg, bw_arc = compute_bw(poly, tol)
    if ctx is None:
        ctx = FitCounter(n)

    penalty = [0] * n
    error = [0.0] * n
    pred: list[Optional[tuple]] = [None] * n
    arc_back = cfg.min_arc_vertices - 1

    for i in range(1, n):
        best_pen = -1
        best_err = math.inf
        best_rank = _ARC_RANK
        best_k = -1
        best_prim: Primitive | None = None
        best_sse = 0.0
        for k in range(i - 1, int(bw_seg[i]) - 1, -1):
            fit = fit_segment(poly, k, i, tol, ctx=ctx)
            if fit is None:
                continue
            cand_pen = penalty[k] + cfg.p_seg
            cand_err = error[k] + fit.sse
            if (
                best_prim is None
                or cand_pen < best_pen
                or (
                    cand_pen == best_pen
                    and _better(cand_err, _SEG_RANK, k, best_err, best_rank, best_k)
                )
            ):
                best_pen, best_err, best_rank, best_k = cand_pen, cand_err, _SEG_RANK, k
                best_prim, best_sse = fit.prim, fit.sse
        for k in range(i - arc_back, int(bw_arc[i]) - 1, -1):
            if k < 0:
                break
            fit = fit_arc(
                poly, k, i, tol, ctx=ctx, min_vertices=cfg.min_arc_vertices, monotone=monotone
            )
            if fit is None:
                continue
            cand_pen = penalty[k] + cfg.p_arc
            cand_err = error[k] + fit.sse
            if (
                best_prim is None
                or cand_pen < best_pen
                or (
                    cand_pen == best_pen
                    and _better(cand_err, _ARC_RANK, k, best_err, best_rank, best_k)
                )
            ):
                best_pen, best_err, best_rank, best_k = cand_pen, cand_err, _ARC_RANK, k
                best_prim, best_sse = fit.prim, fit.sse
        if best_prim is None:
            raise SolverError(f"no feasible primitive ends at vertex {i}")
        penalty[i] = best_pen
        error[i] = best_err
        pred[i] = (best_k, best_prim, best_sse)

    set_last_run(ctx)
    return _reconstruct(pred, error[n - 1], n, cfg, penalty[n - 1])


@dataclass
class TraceRecord:
    level: int
    jump_target: int
    retries: int
    solve_calls: int


@dataclass
class SolverState:
    """Jump-solver bookkeeping, exposed for inspection and unit tests."""

    n: int
    penalty: list[int] = field(default_factory=list)
    solved: list[bool] = field(default_factory=list)
    error: list[float] = field(default_factory=list)
    pred: list = field(default_factory=list)
    last: dict[int, int] = field(default_factory=dict)
    processed: int = 0
    position: int = 0

    def __post_init__(self):
        if not self.penalty:
            self.penalty = [0] * self.n
            self.solved = [False] * self.n
            self.error = [0.0] * self.n
            self.pred = [None] * self.n

    def last_at(self, p: int) -> int:
        if p < 0:
            return NEG_INF
        return self.last[p]


class JumpSolver:
    """Faithful realization of the jump / look-backward algorithm."""

    def __init__(
        self,
        poly: Polyline,
        tol: float,
        cfg: PenaltyConfig,
        tables: ReachTables,
        ctx: FitCounter,
        monotone: bool = True,
        trace: list[TraceRecord] | None = None,
    ):
        self.poly = poly
        self.tol = tol
        self.cfg = cfg
        self.tables = tables
        self.ctx = ctx
        self.monotone = monotone
        self.trace = trace
        self.state = SolverState(poly.n)
        self.solve_calls = 0

    # -- table lookups with the -inf sentinel for invalid indices

    def _fw_seg(self, idx: int) -> int:
        return NEG_INF if idx < 0 else int(self.tables.fw_seg[idx])

    def _fw_arc(self, idx: int) -> int:
        return NEG_INF if idx < 0 else int(self.tables.fw_arc[idx])

    # -- frontier validation

    def chk_adj_pos(self, p: int) -> bool:
        """Validate the frontier entry for penalty p; decrement it when stale."""
        st = self.state
        idx = st.last[p]
        if idx < 0:
            raise SolverError("chk_adj_pos on a dead frontier entry")
        if (st.solved[idx] and st.penalty[idx] == p) or (
            not st.solved[idx] and st.penalty[idx] <= p
        ):
            return True
        st.last[p] = idx - 1
        return False

    def adjust(self, bound: int, p: int) -> None:
        """Decrement last[p] until it passes validation or drops below bound."""
        st = self.state
        while bound <= st.last_at(p):
            if self.chk_adj_pos(p):
                return

    # -- recursive search, run on an explicit generator stack

    def solve(self, i: int, target: int) -> bool:
        """Can vertex i be solved at exactly the target penalty?"""
        self.solve_calls += 1
        depth_bound = target // min(self.cfg.p_seg, self.cfg.p_arc) + 2
        stack = [self._solve_frame(i, target)]
        result: bool | None = None
        while stack:
            frame = stack[-1]
            try:
                call = frame.send(result)
            except StopIteration as stop:
                result = stop.value
                stack.pop()
                continue
            if len(stack) >= depth_bound:
                raise SolverError("solve recursion exceeded its depth bound")
            stack.append(self._solve_frame(*call))
            result = None
        assert result is not None
        return result

    def _solve_frame(self, i: int, target: int):
        st = self.state
        cfg = self.cfg
        if st.solved[i]:
            return st.penalty[i] == target
        poly, tol, ctx = self.poly, self.tol, self.ctx
        while st.penalty[i] <= target:
            p = st.penalty[i]
            if i <= st.last_at(p):
                if cfg.p_arc <= p:
                    a0 = int(self.tables.bw_arc[i])
                    self.adjust(a0, p - cfg.p_arc)
                    a1 = min(st.last_at(p - cfg.p_arc), i - (cfg.min_arc_vertices - 1))
                    k = a1
                    while k >= a0:
                        ok = yield (k, p - cfg.p_arc)
                        if ok:
                            fit = fit_arc(
                                poly,
                                k,
                                i,
                                tol,
                                ctx=ctx,
                                min_vertices=cfg.min_arc_vertices,
                                monotone=self.monotone,
                            )
                            if fit is not None:
                                self._offer(i, k, fit.prim, fit.sse, _ARC_RANK)
                        k -= 1
                if cfg.p_seg <= p:
                    s0 = int(self.tables.bw_seg[i])
                    self.adjust(s0, p - cfg.p_seg)
                    s1 = min(st.last_at(p - cfg.p_seg), i - 1)
                    k = s1
                    while k >= s0:
                        ok = yield (k, p - cfg.p_seg)
                        if ok:
                            fit = fit_segment(poly, k, i, tol, ctx=ctx)
                            if fit is not None:
                                self._offer(i, k, fit.prim, fit.sse, _SEG_RANK)
                        k -= 1
            if st.solved[i]:
                return st.penalty[i] == target
            st.penalty[i] += 1
        return False

    def _offer(self, i: int, k: int, prim: Primitive, prim_sse: float, rank: int) -> None:
        st = self.state
        new_err = st.error[k] + prim_sse
        if not st.solved[i]:
            st.solved[i] = True
            st.error[i] = new_err
            st.pred[i] = (k, prim, prim_sse)
            return
        cur = st.pred[i]
        cur_rank = _ARC_RANK if isinstance(cur[1], AnchoredArc) else _SEG_RANK
        if _better(new_err, rank, k, st.error[i], cur_rank, cur[0]):
            st.error[i] = new_err
            st.pred[i] = (k, prim, prim_sse)

    # -- main loop (one maximum jump per penalty level)

    def run(self) -> CompressedPolyline:
        st = self.state
        cfg = self.cfg
        n = self.poly.n
        st.last[0] = 0
        st.processed = 0
        st.penalty[0] = 0
        st.solved[0] = True
        st.error[0] = 0.0
        st.position = 0
        level_guard = cfg.p_arc * n + cfg.p_arc + cfg.p_seg

        while True:
            st.processed += 1
            p = st.processed
            if p > level_guard:
                raise SolverError("penalty level exceeded the solvable bound")
            st.last[p] = NEG_INF
            start_calls = self.solve_calls
            k, retries = self._find_jump(p, n)
            if k is None:
                continue
            while st.position < k:
                st.position += 1
                st.penalty[st.position] = p
                st.solved[st.position] = False
            st.last[p] = st.position
            if self.trace is not None:
                self.trace.append(
                    TraceRecord(p, k, retries, self.solve_calls - start_calls)
                )
            if st.position + 1 == n:
                if self.solve(st.position, p):
                    set_last_run(self.ctx)
                    return _reconstruct(st.pred, st.error[n - 1], n, cfg, p)
                st.last[p] -= 1

    def _find_jump(self, p: int, n: int) -> tuple[int | None, int]:
        """Run the level's validation loop; (None, retries) means the level is infeasible."""
        st = self.state
        cfg = self.cfg
        retries = -1
        while True:
            retries += 1
            if retries > 50 * n + 100:
                raise SolverError("level retry loop exceeded its bound")
            i = self._fw_seg(st.last_at(p - cfg.p_seg))
            j = self._fw_arc(st.last_at(p - cfg.p_arc))
            k = max(i, j)
            if k == NEG_INF:
                return None, retries
            if i <= j and not self.chk_adj_pos(p - cfg.p_arc):
                continue
            if i >= j and not self.chk_adj_pos(p - cfg.p_seg):
                continue
            if i < j:
                if not self.solve(st.last_at(p - cfg.p_arc), p - cfg.p_arc):
                    continue
            elif i > j:
                if not self.solve(st.last_at(p - cfg.p_seg), p - cfg.p_seg):
                    continue
            else:
                src_seg = st.last_at(p - cfg.p_seg)
                src_arc = st.last_at(p - cfg.p_arc)
                if not st.solved[src_seg] and not st.solved[src_arc]:
                    if not self.solve(src_arc, p - cfg.p_arc):
                        continue
            return min(k, n - 1), retries


def jump_compress(
    poly: Polyline,
    tol: float,
    cfg: PenaltyConfig | None = None,
    tables: ReachTables | None = None,
    ctx: FitCounter | None = None,
    monotone: bool = True,
    trace: list[TraceRecord] | None = None,
) -> CompressedPolyline:
    """Compress via maximum jumps per penalty level plus backward solving."""
    tol = validate_tolerance(tol)
    cfg = cfg or PenaltyConfig()
    if tables is None:
        tables = compute_tables(poly, tol)
    if ctx is None:
        ctx = FitCounter(poly.n)
    solver = JumpSolver(poly, tol, cfg, tables, ctx, monotone=monotone, trace=trace)
    return solver.run()


def verify_within_tolerance(
    poly: Polyline, result: CompressedPolyline, tol: float
) -> float:
    """Exact post-hoc compliance check; returns the worst deviation found.

    Raises SolverError when any source vertex strays beyond tol of its
    assigned primitive or the chain is not contiguous over the polyline.
    """
    worst = 0.0
    expected_start = 0
    for placed in result.primitives:
        prim = placed.prim
        if prim.start_idx != expected_start:
            raise SolverError("primitive chain is not contiguous")
        expected_start = prim.end_idx
        dev = max_deviation(poly, prim.start_idx, prim.end_idx, prim)
        worst = max(worst, dev)
        if dev > tol:
            raise SolverError(
                f"tolerance violated on primitive {prim}: {dev} > {tol}"
            )
    if expected_start != poly.n - 1:
        raise SolverError("primitive chain does not reach the last vertex")
    return worst
