"""Brute-force certifiers for desk-scale validation.

``oracle_compress`` re-solves the compression task with an exhaustive
all-pairs dynamic program whose arc search is dense parameter sampling with
local refinement and exact verification - deliberately a different method
than the production interval intersection, so agreement is evidence rather
than tautology.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .fitting import fit_segment
from .geometry import (
    H_MAX,
    TWO_PI,
    AnchoredArc,
    AnchoredSegment,
    Polyline,
    validate_tolerance,
)
from .solver import PenaltyConfig, PlacedPrimitive

_THETA_CAP = math.atan(0.99 * H_MAX)
_MONOTONE_SLACK = 1e-9


class OracleResult(NamedTuple):
    penalty: int
    sse: float
    witness: list[PlacedPrimitive]


def _arc_scan(poly, k, i, tol, thetas, monotone):
    """Evaluate every sampled center offset; returns (feasible, sse, hs)."""
    ax, ay = float(poly.xs[k]), float(poly.ys[k])
    bx, by = float(poly.xs[i]), float(poly.ys[i])
    dx, dy = bx - ax, by - ay
    length = math.hypot(dx, dy)
    hs = length * np.tan(thetas)
    nx, ny = -dy / length, dx / length
    cx = 0.5 * (ax + bx) + hs * nx
    cy = 0.5 * (ay + by) + hs * ny
    radius = np.hypot(hs, 0.5 * length)

    vx = poly.xs[k + 1 : i][None, :]
    vy = poly.ys[k + 1 : i][None, :]
    rel_x = vx - cx[:, None]
    rel_y = vy - cy[:, None]
    rho = np.hypot(rel_x, rel_y)
    ang = np.arctan2(rel_y, rel_x)

    start = np.arctan2(ay - cy, ax - cx)
    end = np.arctan2(by - cy, bx - cx)
    delta = np.mod(end - start, TWO_PI)
    ccw = delta <= math.pi
    direction = np.where(ccw, 1.0, -1.0)
    sweep = np.where(ccw, delta, TWO_PI - delta)

    alpha = np.mod(direction[:, None] * (ang - start[:, None]), TWO_PI)
    inside = alpha <= sweep[:, None]
    d_end = np.minimum(np.hypot(vx - ax, vy - ay), np.hypot(vx - bx, vy - by))
    dist = np.where(inside, np.abs(rho - radius[:, None]), d_end)
    feasible = dist.max(axis=1) <= tol
    if monotone and rel_x.shape[1] > 1:
        to_end = alpha - sweep[:, None] <= TWO_PI - alpha
        clamped = np.where(inside, alpha, np.where(to_end, sweep[:, None], 0.0))
        feasible &= np.diff(clamped, axis=1).min(axis=1) >= -_MONOTONE_SLACK
    res = rho - radius[:, None]
    sse = (res * res).sum(axis=1)
    return feasible, sse, hs


def oracle_arc_fit(
    poly: Polyline,
    k: int,
    i: int,
    tol: float,
    min_vertices: int = 4,
    monotone: bool = True,
    samples: int = 4096,
) -> tuple[float, float] | None:
    """Best (sse, h) over densely sampled arcs, refined locally; None if infeasible."""
    if i - k < min_vertices - 1:
        return None
    if math.hypot(poly.xs[i] - poly.xs[k], poly.ys[i] - poly.ys[k]) == 0.0:
        return None
    thetas = np.linspace(-_THETA_CAP, _THETA_CAP, samples)
    best: tuple[float, float] | None = None
    for _ in range(5):
        feasible, sse, hs = _arc_scan(poly, k, i, tol, thetas, monotone)
        if not feasible.any():
            break
        idx = int(np.argmin(np.where(feasible, sse, np.inf)))
        if best is None or sse[idx] < best[0]:
            best = (float(sse[idx]), float(hs[idx]))
        lo = thetas[max(0, idx - 1)]
        hi = thetas[min(len(thetas) - 1, idx + 1)]
        if hi - lo <= 1e-15:
            break
        thetas = np.linspace(lo, hi, 65)
    if best is not None:
        # an optimum pinned at the offset cap is numerically a straight
        # segment, not an arc (same family rule as the production fitter)
        length = math.hypot(poly.xs[i] - poly.xs[k], poly.ys[i] - poly.ys[k])
        if abs(best[1]) >= 0.98 * H_MAX * length:
            return None
    return best


def _segment_ok(poly, k, i, tol):
    """Independent chord check: plain per-vertex clamped projection."""
    ax, ay = float(poly.xs[k]), float(poly.ys[k])
    bx, by = float(poly.xs[i]), float(poly.ys[i])
    dx, dy = bx - ax, by - ay
    l2 = dx * dx + dy * dy
    if l2 == 0.0:
        return None
    total = 0.0
    for m in range(k + 1, i):
        px = float(poly.xs[m]) - ax
        py = float(poly.ys[m]) - ay
        t = (px * dx + py * dy) / l2
        t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
        rx, ry = px - t * dx, py - t * dy
        d2 = rx * rx + ry * ry
        if math.sqrt(d2) > tol:
            return None
        total += d2
    return total


def oracle_compress(
    poly: Polyline,
    tol: float,
    cfg: PenaltyConfig | None = None,
    monotone: bool = True,
    max_n: int = 25,
    samples: int = 4096,
) -> OracleResult:
    """Exhaustive minimum-penalty, then minimum-sse compression (small n only)."""
    tol = validate_tolerance(tol)
    cfg = cfg or PenaltyConfig()
    n = poly.n
    if n > max_n:
        raise ValueError(f"oracle guard: n={n} exceeds {max_n}")

    penalty = [0] + [1 << 40] * (n - 1)
    error = [0.0] * n
    pred: list = [None] * n
    for i in range(1, n):
        for k in range(i - 1, -1, -1):
            seg = _segment_ok(poly, k, i, tol)
            if seg is not None:
                cand = (penalty[k] + cfg.p_seg, error[k] + seg)
                if cand < (penalty[i], error[i]) or pred[i] is None:
                    penalty[i], error[i] = cand
                    pred[i] = (k, AnchoredSegment(k, i), seg)
            arc = oracle_arc_fit(
                poly, k, i, tol, cfg.min_arc_vertices, monotone, samples
            )
            if arc is not None:
                arc_sse, h = arc
                cand = (penalty[k] + cfg.p_arc, error[k] + arc_sse)
                if cand < (penalty[i], error[i]) or pred[i] is None:
                    penalty[i], error[i] = cand
                    pred[i] = (k, AnchoredArc(k, i, h), arc_sse)
        if pred[i] is None:
            raise AssertionError(f"oracle found no primitive ending at {i}")

    witness: list[PlacedPrimitive] = []
    idx = n - 1
    while idx > 0:
        k, prim, prim_sse = pred[idx]
        witness.append(PlacedPrimitive(prim, prim_sse))
        idx = k
    witness.reverse()
    return OracleResult(penalty[n - 1], error[n - 1], witness)


def oracle_reach(
    poly: Polyline,
    tol: float,
    i: int,
    min_vertices: int = 4,
    monotone: bool = True,
    max_n: int = 60,
    samples: int = 1024,
) -> tuple[int, int]:
    """Exact maximal feasible anchors (segment, arc) from vertex i, by enumeration.

    Returns i itself for a family with no feasible fit at all.
    """
    tol = validate_tolerance(tol)
    n = poly.n
    if n > max_n:
        raise ValueError(f"oracle guard: n={n} exceeds {max_n}")
    max_seg = i
    max_arc = i
    for m in range(i + 1, n):
        if fit_segment(poly, i, m, tol) is not None:
            max_seg = m
        if oracle_arc_fit(poly, i, m, tol, min_vertices, monotone, samples) is not None:
            max_arc = m
    return max_seg, max_arc


def random_instances(
    seed: int, count: int, n_range: tuple[int, int], profile: str = "walk"
) -> list[Polyline]:
    """Deterministic stream of test polylines.

    Profiles: "walk" (cumulative random steps), "smooth" (noisy chains of
    arcs and straight runs), "mixed" (alternating stretches of both).
    """
    lo, hi = n_range
    if lo < 2 or hi < lo:
        raise ValueError("bad n_range")
    out = []
    root = np.random.SeedSequence(int(seed))
    for child in root.spawn(count):
        rng = np.random.default_rng(child)
        n = int(rng.integers(lo, hi + 1))
        if profile == "walk":
            pts = _walk(rng, n)
        elif profile == "smooth":
            pts = _smooth(rng, n)
        elif profile == "mixed":
            pts = _mixed(rng, n)
        else:
            raise ValueError(f"unknown profile {profile!r}")
        out.append(Polyline(pts))
    return out


def _walk(rng, n):
    turns = rng.normal(0.0, 0.6, size=n - 1)
    headings = np.cumsum(turns) + rng.uniform(0, TWO_PI)
    steps = np.abs(rng.normal(1.0, 0.3, size=n - 1)) + 0.05
    dx = steps * np.cos(headings)
    dy = steps * np.sin(headings)
    pts = np.zeros((n, 2))
    pts[1:, 0] = np.cumsum(dx)
    pts[1:, 1] = np.cumsum(dy)
    return pts


def _smooth(rng, n):
    pts = [np.zeros(2)]
    heading = float(rng.uniform(0, TWO_PI))
    while len(pts) < n:
        run = int(rng.integers(4, 12))
        run = min(run, n - len(pts))
        if rng.random() < 0.5:
            step = float(rng.uniform(0.2, 0.5))
            for _ in range(run):
                noise = rng.normal(0.0, 0.02)
                d = np.array([math.cos(heading), math.sin(heading)])
                nrm = np.array([-d[1], d[0]])
                pts.append(pts[-1] + step * d + noise * nrm)
        else:
            radius = float(rng.uniform(0.8, 3.0))
            turn = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.05, 0.25))
            for _ in range(run):
                heading += turn
                d = np.array([math.cos(heading), math.sin(heading)])
                step = abs(turn) * radius
                noise = rng.normal(0.0, 0.01)
                nrm = np.array([-d[1], d[0]])
                pts.append(pts[-1] + step * d + noise * nrm)
        heading += float(rng.normal(0.0, 0.3))
    return np.array(pts[:n])


def _mixed(rng, n):
    half = max(2, n // 2)
    first = _walk(rng, half)
    second = _smooth(rng, max(2, n - half + 1))
    shifted = second[1:] + first[-1]
    return np.vstack([first, shifted])[:n]
