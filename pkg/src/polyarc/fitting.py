"""Anchored fit queries.

Given two anchor vertices (k, i) and a tolerance, decide whether a straight
segment or a circular arc through both anchors stays within tolerance of the
intermediate vertices, and return the error-minimizing primitive.

Arc feasibility is decided exactly: for one interior vertex ``v`` the set of
center offsets ``h`` with ``| |v - c(h)| - r(h) | <= tol`` is the solution
set of a single quadratic inequality in ``h`` (obtained by squaring the
two-sided constraint), so the per-vertex sets are plain intervals, wrapping
sets (feasible outside a gap, through the degenerate line h -> inf), or the
full line.  The query intersects them, picks the sse-minimizing ``h`` and
verifies the result against the exact arc distance before accepting.

Both solvers call these queries per anchored pair; the functions are kept
allocation-lean because they dominate the solvers' runtime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .geometry import (
    H_MAX,
    TWO_PI,
    AnchoredArc,
    AnchoredSegment,
    Point2D,
    Polyline,
)

_SPLIT_EPS = 1e-14  # relative offset (in chord lengths) used beside h = 0
_MONOTONE_SLACK = 1e-9
_NEG_INF = -math.inf
_POS_INF = math.inf


class SegmentFit(NamedTuple):
    prim: AnchoredSegment
    sse: float
    max_dev: float


class ArcFit(NamedTuple):
    prim: AnchoredArc
    sse: float
    max_dev: float


@dataclass(frozen=True)
class HInterval:
    """Feasible center offsets for one vertex.

    Plain form (``wraps=False``): the closed interval [lo, hi].  Wrapping
    form (``wraps=True``): the complement-through-infinity set
    (-inf, lo] u [hi, +inf), which also contains the degenerate straight
    line; (lo, hi) is then the excluded gap.  ``lo <= hi`` in both forms.
    """

    lo: float = -math.inf
    hi: float = math.inf
    wraps: bool = False
    empty: bool = False

    def contains(self, h: float) -> bool:
        if self.empty:
            return False
        if self.wraps:
            return h <= self.lo or h >= self.hi
        return self.lo <= h <= self.hi

    def is_full(self) -> bool:
        return (not self.empty) and (not self.wraps) and math.isinf(self.lo) and math.isinf(self.hi)


FULL_INTERVAL = HInterval()
EMPTY_INTERVAL = HInterval(empty=True)


class FitCounter:
    """Per-solver-run fit instrumentation.

    Counts segment and arc fit queries; with duplicate tracking enabled it
    also detects (k, i, type) triples queried more than once in one run.
    """

    __slots__ = ("segment_fits", "arc_fits", "duplicate_pairs", "_seen", "_shift")

    def __init__(self, n: int = 0, track_duplicates: bool = True):
        self.segment_fits = 0
        self.arc_fits = 0
        self.duplicate_pairs = 0
        self._seen: set[int] | None = set() if track_duplicates else None
        self._shift = max(n, 2).bit_length() + 1

    def record(self, is_arc: bool, k: int, i: int) -> None:
        if is_arc:
            self.arc_fits += 1
        else:
            self.segment_fits += 1
        seen = self._seen
        if seen is not None:
            key = ((k << self._shift | i) << 1) | is_arc
            if key in seen:
                self.duplicate_pairs += 1
            else:
                seen.add(key)

    def totals(self) -> tuple[int, int, int]:
        return self.segment_fits, self.arc_fits, self.duplicate_pairs


_LAST_RUN: FitCounter | None = None


def set_last_run(counter: FitCounter | None) -> None:
    global _LAST_RUN
    _LAST_RUN = counter


def count_fit_calls() -> tuple[int, int, int]:
    """Counters of the most recent solver run: (segment_fits, arc_fits, duplicate_pairs)."""
    if _LAST_RUN is None:
        return 0, 0, 0
    return _LAST_RUN.totals()


_SMALL = 16  # below this span plain floats beat numpy call overhead


def fit_segment(
    poly: Polyline, k: int, i: int, tol: float, ctx: FitCounter | None = None
) -> Optional[SegmentFit]:
    """Fit the chord [p_k, p_i]; returns the fit iff every interior vertex is within tol."""
    if ctx is not None:
        ctx.record(False, k, i)
    xs = poly.xs
    ys = poly.ys
    ax = xs[k]
    ay = ys[k]
    dx = xs[i] - ax
    dy = ys[i] - ay
    l2 = dx * dx + dy * dy
    if l2 == 0.0:
        return None
    if i - k == 1:
        return SegmentFit(AnchoredSegment(k, i), 0.0, 0.0)
    if i - k <= _SMALL:
        # scalar path; same IEEE operations as below, so results are bit-equal
        ax = float(ax)
        ay = float(ay)
        dx = float(dx)
        dy = float(dy)
        l2 = float(l2)
        tol2 = tol * tol
        max_r2 = 0.0
        total = 0.0
        for px, py in zip(xs[k + 1 : i].tolist(), ys[k + 1 : i].tolist()):
            px -= ax
            py -= ay
            t = (px * dx + py * dy) / l2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            px -= t * dx
            py -= t * dy
            r2 = px * px
            r2 += py * py
            if r2 > max_r2:
                if r2 > tol2 and math.sqrt(r2) > tol:
                    return None
                max_r2 = r2
            total += r2
        return SegmentFit(AnchoredSegment(k, i), total, math.sqrt(max_r2))
    px = xs[k + 1 : i] - ax
    py = ys[k + 1 : i] - ay
    t = (px * dx + py * dy) / l2
    np.clip(t, 0.0, 1.0, out=t)
    px -= t * dx
    py -= t * dy
    r2 = px * px
    r2 += py * py
    max_dev = math.sqrt(float(r2.max()))
    if max_dev > tol:
        return None
    return SegmentFit(AnchoredSegment(k, i), float(r2.sum()), max_dev)


# ---------------------------------------------------------------------------
# arc fitting
# ---------------------------------------------------------------------------


def fit_arc(
    poly: Polyline,
    k: int,
    i: int,
    tol: float,
    ctx: FitCounter | None = None,
    min_vertices: int = 4,
    monotone: bool = True,
) -> Optional[ArcFit]:
    """Fit a circular arc anchored at (p_k, p_i) to the interior vertices.

    Intersects the per-vertex feasible-h sets; within the intersection the
    radial-sse minimizer is located from a closed-form seed plus Newton
    refinement, then validated against the exact arc distance (and the
    monotone projection order unless disabled).  An sse optimum at the
    flat-arc cap means the best arc is numerically a straight segment and
    reports no fit.
    """
    if i - k < min_vertices - 1:
        return None
    if ctx is not None:
        ctx.record(True, k, i)
    xs = poly.xs
    ys = poly.ys
    ax = xs[k]
    ay = ys[k]
    dx = xs[i] - ax
    dy = ys[i] - ay
    l2 = dx * dx + dy * dy
    if l2 == 0.0:
        return None
    length = math.sqrt(l2)
    if i - k <= _SMALL and length >= 2.0 * tol:
        return _fit_arc_small(poly, k, i, tol, length, l2, dx, dy, monotone)
    inv_l = 1.0 / length
    mx = 0.5 * (ax + xs[i])
    my = 0.5 * (ay + ys[i])

    X = xs[k + 1 : i]
    Y = ys[k + 1 : i]
    dxl = dx * inv_l
    dyl = dy * inv_l
    s = X * dxl + Y * dyl - (mx * dxl + my * dyl)
    t = Y * dxl - X * dyl - (my * dxl - mx * dyl)
    s2 = s * s
    t2 = t * t
    half_l2 = 0.25 * l2
    c_val = s2 + t2 - half_l2
    tol2 = tol * tol
    cap = H_MAX * length

    comps = _components(s, t, s2, t2, c_val, length, l2, tol, tol2, cap)
    if not comps:
        return None
    # the arc side flips at h = 0; search each side separately.  Component
    # ends are feasibility-boundary roots where the exact deviation equals
    # tol up to roundoff, so pull candidates strictly inside.
    split = _SPLIT_EPS * length
    sides: list[tuple[float, float]] = []
    for lo, hi in comps:
        inset = 1e-11 * (length + abs(lo) + abs(hi))
        if hi - lo > 2.0 * inset:
            lo += inset
            hi -= inset
        else:
            lo = hi = 0.5 * (lo + hi)
        if lo < -split and hi >= 0.0:
            sides.append((lo, -split))
            sides.append((0.0, hi))
        else:
            sides.append((lo, hi))

    # closed-form seed: stationary points of sum((C - 2 t h)^2) / (4 h^2 + L^2)
    s_cc = float(np.dot(c_val, c_val))
    s_ct = float(np.dot(c_val, t))
    s_tt = float(t2.sum())
    seeds = _seed_offsets(s_cc, s_ct, s_tt, l2)
    seed = min(seeds, key=lambda h: _algebraic_proxy(s_cc, s_ct, s_tt, l2, h))

    hs: list[float] = []
    owner: list[int] = []
    for idx, (lo, hi) in enumerate(sides):
        for h0 in (seed, -cap, cap):
            hs.append(min(hi, max(lo, h0)))
            owner.append(idx)
    fs = _radial_sse_batch(s2, t, half_l2, hs).tolist()

    # an sse optimum at the flat-arc cap means the best "arc" is numerically a
    # straight segment: report no arc fit
    near_cap = 0.999999 * cap
    if abs(hs[min(range(len(hs)), key=fs.__getitem__)]) >= near_cap:
        return None

    order = sorted(range(len(hs)), key=fs.__getitem__)
    refined: set[int] = set()
    tried: list[float] = []
    verifies = 0
    for pos in order:
        if verifies >= 4:
            break
        h, f = hs[pos], fs[pos]
        side = owner[pos]
        if side not in refined and len(refined) < 2:
            refined.add(side)
            lo, hi = sides[side]
            if hi > lo:
                h, f = _newton_refine(s2, t, half_l2, h, f, lo, hi)
        if abs(h) >= near_cap or any(h == hh for hh in tried):
            continue
        tried.append(h)
        verifies += 1
        ok, max_dev = _verify_arc(poly, k, i, h, tol, monotone, length)
        if ok:
            return ArcFit(AnchoredArc(k, i, h), f, max_dev)
    # last resort per the retry rule: side midpoints
    for lo, hi in sides[:2]:
        h = 0.5 * (lo + hi)
        if abs(h) >= near_cap or any(h == hh for hh in tried):
            continue
        ok, max_dev = _verify_arc(poly, k, i, h, tol, monotone, length)
        if ok:
            return ArcFit(AnchoredArc(k, i, h), _radial_sse(s2, t, half_l2, h), max_dev)
    return None


def _fit_arc_small(
    poly: Polyline,
    k: int,
    i: int,
    tol: float,
    length: float,
    l2: float,
    dx: float,
    dy: float,
    monotone: bool,
) -> Optional[ArcFit]:
    """Scalar twin of the main arc query for short interior runs.

    Same feasibility algebra per vertex, same candidate policy; the final
    acceptance still goes through the shared (numpy) exact verification so
    accepted fits replay identically in compliance audits.
    """
    xs = poly.xs
    ys = poly.ys
    ax = float(xs[k])
    ay = float(ys[k])
    dx = float(dx)
    dy = float(dy)
    l2 = float(l2)
    inv_l = 1.0 / length
    mx = 0.5 * (ax + float(xs[i]))
    my = 0.5 * (ay + float(ys[i]))
    dxl = dx * inv_l
    dyl = dy * inv_l
    off_s = mx * dxl + my * dyl
    off_t = my * dxl - mx * dyl
    half_l2 = 0.25 * l2
    cap = H_MAX * length

    s_list: list[float] = []
    t_list: list[float] = []
    lo, hi = -cap, cap
    gaps: list[tuple[float, float]] = []
    s_cc = s_ct = s_tt = 0.0
    for xv, yv in zip(xs[k + 1 : i].tolist(), ys[k + 1 : i].tolist()):
        sv = xv * dxl + yv * dyl - off_s
        tv = yv * dxl - xv * dyl - off_t
        s_list.append(sv)
        t_list.append(tv)
        cv = sv * sv + tv * tv - half_l2
        s_cc += cv * cv
        s_ct += cv * tv
        s_tt += tv * tv
        iv = _vertex_constraint(sv, tv, length, tol, False)
        if iv.empty:
            return None
        if iv.wraps:
            gaps.append((iv.lo, iv.hi))
        elif not iv.is_full():
            if iv.lo > lo:
                lo = iv.lo
            if iv.hi < hi:
                hi = iv.hi
            if lo > hi:
                return None
    comps: list[tuple[float, float]] = []
    if gaps:
        gaps.sort()
        cur = lo
        for a, b in gaps:
            if a > cur:
                comps.append((cur, min(a, hi)))
            if b > cur:
                cur = b
            if cur >= hi:
                break
        else:
            comps.append((cur, hi))
        comps = [(a, b) for a, b in comps if a <= b]
        if not comps:
            return None
    else:
        comps = [(lo, hi)]

    split = _SPLIT_EPS * length
    sides: list[tuple[float, float]] = []
    for c_lo, c_hi in comps:
        inset = 1e-11 * (length + abs(c_lo) + abs(c_hi))
        if c_hi - c_lo > 2.0 * inset:
            c_lo += inset
            c_hi -= inset
        else:
            c_lo = c_hi = 0.5 * (c_lo + c_hi)
        if c_lo < -split and c_hi >= 0.0:
            sides.append((c_lo, -split))
            sides.append((0.0, c_hi))
        else:
            sides.append((c_lo, c_hi))

    seeds = _seed_offsets(s_cc, s_ct, s_tt, l2)
    seed = min(seeds, key=lambda h: _algebraic_proxy(s_cc, s_ct, s_tt, l2, h))

    def sse_at(h: float) -> float:
        r = math.sqrt(h * h + half_l2)
        total = 0.0
        for sv, tv in zip(s_list, t_list):
            res = math.sqrt(sv * sv + (tv - h) ** 2) - r
            total += res * res
        return total

    hs: list[float] = []
    owner: list[int] = []
    for idx, (c_lo, c_hi) in enumerate(sides):
        for h0 in (seed, -cap, cap):
            hs.append(min(c_hi, max(c_lo, h0)))
            owner.append(idx)
    fs = [sse_at(h) for h in hs]

    near_cap = 0.999999 * cap
    if abs(hs[min(range(len(hs)), key=fs.__getitem__)]) >= near_cap:
        return None

    order = sorted(range(len(hs)), key=fs.__getitem__)
    refined: set[int] = set()
    tried: list[float] = []
    verifies = 0
    for pos in order:
        if verifies >= 4:
            break
        h, f = hs[pos], fs[pos]
        side = owner[pos]
        if side not in refined and len(refined) < 2:
            refined.add(side)
            c_lo, c_hi = sides[side]
            if c_hi > c_lo:
                h, f = _newton_small(s_list, t_list, half_l2, h, f, c_lo, c_hi, sse_at)
        if abs(h) >= near_cap or any(h == hh for hh in tried):
            continue
        tried.append(h)
        verifies += 1
        ok, max_dev = _verify_arc(poly, k, i, h, tol, monotone, length)
        if ok:
            return ArcFit(AnchoredArc(k, i, h), f, max_dev)
    for c_lo, c_hi in sides[:2]:
        h = 0.5 * (c_lo + c_hi)
        if abs(h) >= near_cap or any(h == hh for hh in tried):
            continue
        ok, max_dev = _verify_arc(poly, k, i, h, tol, monotone, length)
        if ok:
            return ArcFit(AnchoredArc(k, i, h), sse_at(h), max_dev)
    return None


def _newton_small(s_list, t_list, half_l2, h0, f0, lo, hi, sse_at) -> tuple[float, float]:
    best_h, best_f = h0, f0
    h = h0
    for _ in range(2):
        r = math.sqrt(h * h + half_l2)
        drr = half_l2 / (r * r * r) if r > 0.0 else 0.0
        hr = h / r if r > 0.0 else 0.0
        f1 = 0.0
        f2 = 0.0
        res_sum = 0.0
        for sv, tv in zip(s_list, t_list):
            s2v = sv * sv
            d = math.sqrt(s2v + (tv - h) ** 2)
            if d < 1e-300:
                d = 1e-300
            res = d - r
            g = (h - tv) / d - hr
            f1 += res * g
            f2 += g * g + res * (s2v / (d * d * d))
            res_sum += res
        f2 -= drr * res_sum
        if f2 <= 0.0 or not math.isfinite(f2):
            break
        step = f1 / f2
        if not math.isfinite(step):
            break
        h_new = min(hi, max(lo, h - step))
        if h_new == h:
            break
        h = h_new
        f = sse_at(h)
        if f < best_f:
            best_f, best_h = f, h
        else:
            break
    return best_h, best_f


def _components(
    s, t, s2, t2, c_val, length, l2, tol, tol2, cap
) -> list[tuple[float, float]]:
    """Intersect the per-vertex feasible-h sets over [-cap, cap].

    The outer bound |v-c| <= r + tol and inner bound |v-c| >= r - tol
    square into one quadratic Q(h) <= 0 per vertex: feasible between its
    roots when |t| > tol, outside the root gap when |t| < tol, everywhere
    when the discriminant is negative.  Near-anchor vertices come out
    unconstraining automatically (triangle inequality).
    """
    if length < 2.0 * tol:
        return _components_short_chord(s, t, length, tol, cap)
    b_val = c_val - tol2
    qa = t2 - tol2
    disc = b_val * b_val + l2 * qa
    if float(qa.min()) == 0.0 and (qa == 0.0).any():
        return _components_degenerate(s, t, length, tol, cap)
    sq = tol * np.sqrt(np.maximum(disc, 0.0))
    bt = b_val * t
    den = qa + qa
    r_lo = (bt - sq) / den
    r_hi = (bt + sq) / den
    bounded = qa > 0.0
    if bounded.any():
        lo = max(-cap, float(np.where(bounded, r_lo, _NEG_INF).max()))
        hi = min(cap, float(np.where(bounded, r_hi, _POS_INF).min()))
        if lo > hi:
            return []
    else:
        lo, hi = -cap, cap
    wrap = ~bounded & (disc > 0.0)
    if not wrap.any():
        return [(lo, hi)]
    # for qa < 0 the division flips the roots: the excluded gap is (r_hi, r_lo)
    g_lo = r_hi[wrap]
    g_hi = r_lo[wrap]
    live = (g_hi > lo) & (g_lo < hi)
    if not live.any():
        return [(lo, hi)]
    g_lo = g_lo[live]
    g_hi = g_hi[live]
    order = np.argsort(g_lo)
    comps: list[tuple[float, float]] = []
    cur = lo
    for a, b in zip(g_lo[order].tolist(), g_hi[order].tolist()):
        if a > cur:
            comps.append((cur, min(a, hi)))
        if b > cur:
            cur = b
        if cur >= hi:
            return comps
    comps.append((cur, hi))
    return comps


def _components_degenerate(s, t, length, tol, cap) -> list[tuple[float, float]]:
    """Scalar fallback when some vertex sits exactly tol off the chord line."""
    comps = [(-cap, cap)]
    for sv, tv in zip(s.tolist(), t.tolist()):
        iv = _vertex_constraint(sv, tv, length, tol, False)
        comps = _intersect_lists(comps, _interval_pieces(iv, cap))
        if not comps:
            return []
    return comps


def _components_short_chord(s, t, length, tol, cap) -> list[tuple[float, float]]:
    """Exact fallback when the chord is shorter than the tolerance diameter.

    Circles with r(h) <= tol void the inner bound, adding a band around
    h = 0 to each vertex's feasible set.
    """
    comps = [(-cap, cap)]
    for sv, tv in zip(s.tolist(), t.tolist()):
        base = _vertex_constraint(sv, tv, length, tol, False)
        pieces = _interval_pieces(base, cap)
        extra = _upper_only_band(sv, tv, length, tol)
        if extra is not None:
            pieces.append(extra)
        comps = _intersect_lists(comps, _normalize(pieces))
        if not comps:
            return []
    return comps


def _interval_pieces(iv: HInterval, cap: float) -> list[tuple[float, float]]:
    if iv.empty:
        return []
    if iv.wraps:
        return [(-cap, iv.lo), (iv.hi, cap)]
    return [(max(iv.lo, -cap), min(iv.hi, cap))]


def _normalize(pieces: list[tuple[float, float]]) -> list[tuple[float, float]]:
    good = sorted((a, b) for a, b in pieces if a <= b)
    out: list[tuple[float, float]] = []
    for a, b in good:
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def _intersect_lists(
    xs: list[tuple[float, float]], ys: list[tuple[float, float]]
) -> list[tuple[float, float]]:
    out = []
    for a1, b1 in xs:
        for a2, b2 in ys:
            lo, hi = max(a1, a2), min(b1, b2)
            if lo <= hi:
                out.append((lo, hi))
    return _normalize(out)


def _algebraic_proxy(
    s_cc: float, s_ct: float, s_tt: float, l2: float, h: float
) -> float:
    return (s_cc - 4.0 * h * s_ct + 4.0 * h * h * s_tt) / (4.0 * h * h + l2)


def _seed_offsets(s_cc: float, s_ct: float, s_tt: float, l2: float) -> tuple[float, ...]:
    a = 4.0 * s_ct
    b = 2.0 * (s_tt * l2 - s_cc)
    c = -s_ct * l2
    if a == 0.0:
        if b == 0.0:
            return (0.0,)
        return (-c / b,)
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return (0.0,)
    root = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(root, b)) if b != 0.0 else 0.5 * root
    if q == 0.0:
        return (0.0,)
    return (q / a, c / q)


def _radial_sse(s2: np.ndarray, t: np.ndarray, half_l2: float, h: float) -> float:
    d = np.sqrt(s2 + (t - h) ** 2)
    res = d - math.sqrt(h * h + half_l2)
    return float(np.dot(res, res))


def _radial_sse_batch(
    s2: np.ndarray, t: np.ndarray, half_l2: float, hs: list[float]
) -> np.ndarray:
    h = np.asarray(hs)
    d = np.sqrt(s2 + (t - h[:, None]) ** 2)
    res = d - np.sqrt(h * h + half_l2)[:, None]
    return (res * res).sum(axis=1)


def _newton_refine(
    s2: np.ndarray,
    t: np.ndarray,
    half_l2: float,
    h0: float,
    f0: float,
    lo: float,
    hi: float,
) -> tuple[float, float]:
    """Two damped Newton steps on the radial sse, clamped to [lo, hi]."""
    best_h, best_f = h0, f0
    h = h0
    for _ in range(2):
        d = np.sqrt(s2 + (t - h) ** 2)
        np.maximum(d, 1e-300, out=d)
        r = math.sqrt(h * h + half_l2)
        res = d - r
        g = (h - t) / d
        if r > 0.0:
            g -= h / r
            drr = half_l2 / (r * r * r)
        else:
            drr = 0.0
        f1 = float(np.dot(res, g))
        d3 = d * d
        d3 *= d
        f2 = float(np.dot(g, g) + np.dot(res, s2 / d3)) - drr * float(res.sum())
        if f2 <= 0.0 or not math.isfinite(f2):
            break
        step = f1 / f2
        if not math.isfinite(step):
            break
        h_new = min(hi, max(lo, h - step))
        if h_new == h:
            break
        h = h_new
        f = _radial_sse(s2, t, half_l2, h)
        if f < best_f:
            best_f, best_h = f, h
        else:
            break
    return best_h, best_f


def _verify_arc(
    poly: Polyline,
    k: int,
    i: int,
    h: float,
    tol: float,
    monotone: bool,
    length: float,
) -> tuple[bool, float]:
    """Exact acceptance check: closed-arc distances and projection order.

    The arithmetic mirrors geometry.arc_geometry / arc_distances operation
    for operation, so an accepted fit reproduces bit-identical deviations in
    any later compliance audit.
    """
    xs = poly.xs
    ys = poly.ys
    ax = float(xs[k])
    ay = float(ys[k])
    bx = float(xs[i])
    by = float(ys[i])
    dxc = bx - ax
    dyc = by - ay
    chord = math.hypot(dxc, dyc)
    nx = -dyc / chord
    ny = dxc / chord
    cx = 0.5 * (ax + bx) + h * nx
    cy = 0.5 * (ay + by) + h * ny
    radius = math.hypot(h, 0.5 * chord)
    start = math.atan2(ay - cy, ax - cx)
    delta = (math.atan2(by - cy, bx - cx) - start) % TWO_PI
    if delta <= math.pi:
        direction, sweep = 1.0, delta
    else:
        direction, sweep = -1.0, TWO_PI - delta

    X = xs[k + 1 : i]
    Y = ys[k + 1 : i]
    rel_x = X - cx
    rel_y = Y - cy
    alpha = (np.arctan2(rel_y, rel_x) - start) * direction
    alpha %= TWO_PI
    inside = alpha <= sweep
    radial = np.abs(np.hypot(rel_x, rel_y) - radius)
    if inside.all():
        dev = radial
        clamped = alpha
    else:
        d_end = np.minimum(np.hypot(X - ax, Y - ay), np.hypot(X - bx, Y - by))
        dev = np.where(inside, radial, d_end)
        to_end = alpha - sweep <= TWO_PI - alpha
        clamped = np.where(inside, alpha, np.where(to_end, sweep, 0.0))
    max_dev = float(dev.max())
    if max_dev > tol:
        return False, max_dev
    if monotone and clamped.shape[0] > 1:
        if float(np.diff(clamped).min()) < -_MONOTONE_SLACK:
            return False, max_dev
    return True, max_dev


# ---------------------------------------------------------------------------
# single-vertex query
# ---------------------------------------------------------------------------


def _vertex_constraint(
    s: float, t: float, length: float, tol: float, near_anchor: bool
) -> HInterval:
    """Feasible-h set for a single interior vertex, exact."""
    if near_anchor:
        return FULL_INTERVAL
    c_val = s * s + t * t - 0.25 * length * length
    b_val = c_val - tol * tol
    qa = t * t - tol * tol
    disc = b_val * b_val + length * length * qa
    if qa > 0.0:
        root = tol * math.sqrt(disc)
        lo = (b_val * t - root) / (2.0 * qa)
        hi = (b_val * t + root) / (2.0 * qa)
        return HInterval(lo, hi)
    if qa < 0.0:
        if disc < 0.0:
            return FULL_INTERVAL
        root = tol * math.sqrt(disc)
        g_lo = (b_val * t + root) / (2.0 * qa)
        g_hi = (b_val * t - root) / (2.0 * qa)
        return HInterval(g_lo, g_hi, wraps=True)
    # |t| == tol exactly: the quadratic degenerates to a half line
    slope = b_val * t
    if slope == 0.0:
        return FULL_INTERVAL if b_val * b_val <= tol * tol * length * length else EMPTY_INTERVAL
    bound = (b_val * b_val - tol * tol * length * length) / (4.0 * slope)
    if slope > 0.0:
        return HInterval(bound, math.inf)
    return HInterval(-math.inf, bound)


def _upper_only_band(
    s: float, t: float, length: float, tol: float
) -> tuple[float, float] | None:
    """Offsets h with r(h) <= tol where only the outer bound |v-c| <= r + tol binds.

    On short chords (length < 2 tol) the circle can be smaller than the
    tolerance, voiding the inner bound.  The new feasibility beyond the
    two-sided quadratic is exactly {B - 2 t h <= 0} restricted to that band.
    """
    h_small_sq = tol * tol - 0.25 * length * length
    if h_small_sq <= 0.0:
        return None
    h_small = math.sqrt(h_small_sq)
    b_val = s * s + t * t - 0.25 * length * length - tol * tol
    if t == 0.0:
        return (-h_small, h_small) if b_val <= 0.0 else None
    bound = b_val / (2.0 * t)
    if t > 0.0:
        lo, hi = max(-h_small, bound), h_small
    else:
        lo, hi = -h_small, min(h_small, bound)
    if lo > hi:
        return None
    return lo, hi


def feasible_h_interval(
    v: Point2D, k: int, i: int, tol: float, poly: Polyline
) -> HInterval:
    """Center offsets h whose circle through the anchors passes within tol of v.

    The set is connected once the parameter line is compactified through the
    degenerate straight line (h -> +-inf): a plain interval, a wrapping set,
    the full line, or empty.
    """
    ax, ay = float(poly.xs[k]), float(poly.ys[k])
    bx, by = float(poly.xs[i]), float(poly.ys[i])
    dx, dy = bx - ax, by - ay
    length = math.hypot(dx, dy)
    if length == 0.0:
        raise ValueError("degenerate chord: coincident anchors")
    mx, my = 0.5 * (ax + bx), 0.5 * (ay + by)
    s = ((v[0] - mx) * dx + (v[1] - my) * dy) / length
    t = (-(v[0] - mx) * dy + (v[1] - my) * dx) / length
    near = (
        math.hypot(v[0] - ax, v[1] - ay) <= tol
        or math.hypot(v[0] - bx, v[1] - by) <= tol
    )
    base = _vertex_constraint(s, t, length, tol, near)
    if length >= 2.0 * tol or base.is_full() or base.empty:
        return base
    extra = _upper_only_band(s, t, length, tol)
    if extra is None:
        return base
    e_lo, e_hi = extra
    if not base.wraps:
        return HInterval(min(base.lo, e_lo), max(base.hi, e_hi))
    # wraps: the band fills (part of) the excluded gap, always from one end
    g_lo, g_hi = base.lo, base.hi
    if e_lo <= g_lo:
        g_lo = max(g_lo, min(e_hi, g_hi))
    if e_hi >= g_hi:
        g_hi = min(g_hi, max(e_lo, g_lo))
    if g_lo >= g_hi:
        return FULL_INTERVAL
    return HInterval(g_lo, g_hi, wraps=True)
