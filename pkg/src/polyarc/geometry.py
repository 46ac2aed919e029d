"""Planar geometry primitives: points, polylines, anchored segments and arcs.

An anchored primitive interpolates two designated polyline vertices exactly.
Arcs carry one degree of freedom: the signed offset ``h`` of the circle
center from the chord midpoint along the chord's left normal.  The realized
arc is always the minor side (central angle <= pi); the two sides of the
chord are reached through the sign of ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

TWO_PI = 2.0 * math.pi

# |h| is capped at H_MAX * chord_length; beyond that the arc is numerically a
# straight segment and arc fitting reports no fit.
H_MAX = 1.0e6


class Point2D(NamedTuple):
    x: float
    y: float


class AnchoredSegment(NamedTuple):
    """Straight segment between two source vertices."""

    start_idx: int
    end_idx: int


class AnchoredArc(NamedTuple):
    """Circular arc through two source vertices with center offset ``h``."""

    start_idx: int
    end_idx: int
    center_offset: float


Primitive = Union[AnchoredSegment, AnchoredArc]


class Polyline:
    """Immutable ordered vertex sequence backed by numpy coordinate arrays."""

    __slots__ = ("xs", "ys")

    def __init__(self, vertices: Sequence | np.ndarray):
        pts = np.asarray(vertices, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("polyline expects an (n, 2) array of vertices")
        if pts.shape[0] < 2:
            raise ValueError("polyline needs at least 2 vertices")
        if not np.all(np.isfinite(pts)):
            raise ValueError("polyline vertices must be finite")
        dx = np.diff(pts[:, 0])
        dy = np.diff(pts[:, 1])
        if np.any((dx == 0.0) & (dy == 0.0)):
            raise ValueError("consecutive duplicate vertices (collapse them first)")
        self.xs = np.ascontiguousarray(pts[:, 0])
        self.ys = np.ascontiguousarray(pts[:, 1])
        self.xs.flags.writeable = False
        self.ys.flags.writeable = False

    @property
    def n(self) -> int:
        return self.xs.shape[0]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> Point2D:
        return Point2D(float(self.xs[i]), float(self.ys[i]))

    def points(self) -> list[Point2D]:
        return [Point2D(float(x), float(y)) for x, y in zip(self.xs, self.ys)]

    def bbox_diagonal(self) -> float:
        w = float(self.xs.max() - self.xs.min())
        h = float(self.ys.max() - self.ys.min())
        return math.hypot(w, h)

    def reversed(self) -> "Polyline":
        return Polyline(np.stack([self.xs[::-1], self.ys[::-1]], axis=1))


def collapse_duplicates(vertices: Sequence | np.ndarray) -> tuple[np.ndarray, int]:
    """Drop consecutive near-duplicate vertices.

    Two consecutive vertices are merged when their distance is below
    1e-12 times the bounding-box diagonal.  Returns the cleaned (n, 2)
    array and the number of vertices removed.
    """
    pts = np.asarray(vertices, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
        raise ValueError("expected a nonempty (n, 2) vertex array")
    diag = math.hypot(
        float(pts[:, 0].max() - pts[:, 0].min()),
        float(pts[:, 1].max() - pts[:, 1].min()),
    )
    eps = 1e-12 * diag
    keep = [0]
    for i in range(1, pts.shape[0]):
        last = pts[keep[-1]]
        if math.hypot(pts[i, 0] - last[0], pts[i, 1] - last[1]) > eps:
            keep.append(i)
    return pts[keep], pts.shape[0] - len(keep)


def validate_tolerance(tol: float) -> float:
    tol = float(tol)
    if not (tol > 0.0 and math.isfinite(tol)):
        raise ValueError(f"tolerance must be a positive finite number, got {tol!r}")
    return tol


def dist_point_segment(q: Point2D, a: Point2D, b: Point2D) -> float:
    """Euclidean distance from ``q`` to the closed segment [a, b]."""
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    l2 = dx * dx + dy * dy
    if l2 == 0.0:
        return math.hypot(q[0] - a[0], q[1] - a[1])
    t = ((q[0] - a[0]) * dx + (q[1] - a[1]) * dy) / l2
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return math.hypot(q[0] - a[0] - t * dx, q[1] - a[1] - t * dy)


@dataclass(frozen=True)
class ArcGeometry:
    """Realized circle data for an anchored arc.

    ``direction`` is +1 for counterclockwise travel from the start anchor to
    the end anchor, -1 for clockwise; ``sweep`` is the central angle in
    (0, pi].
    """

    center: Point2D
    radius: float
    start_angle: float
    sweep: float
    direction: int


def arc_geometry(arc: AnchoredArc, poly: Polyline) -> ArcGeometry:
    """Realize an anchored arc: center, radius and swept sector.

    The center sits at ``chord midpoint + h * left_normal``; both anchors lie
    on the circle exactly.  The traversed arc is the minor one (the side
    away from the center), so each sign of ``h`` selects one side of the
    chord.
    """
    k, i, h = arc.start_idx, arc.end_idx, arc.center_offset
    if not 0 <= k < i < poly.n:
        raise ValueError(f"arc anchors out of range: ({k}, {i})")
    ax, ay = float(poly.xs[k]), float(poly.ys[k])
    bx, by = float(poly.xs[i]), float(poly.ys[i])
    dx, dy = bx - ax, by - ay
    length = math.hypot(dx, dy)
    if length == 0.0:
        raise ValueError("degenerate chord: coincident anchors")
    if abs(h) > H_MAX * length:
        raise ValueError("center offset beyond the flat-arc cap")
    # left unit normal of the chord
    nx, ny = -dy / length, dx / length
    cx = 0.5 * (ax + bx) + h * nx
    cy = 0.5 * (ay + by) + h * ny
    radius = math.hypot(h, 0.5 * length)
    start_angle = math.atan2(ay - cy, ax - cx)
    end_angle = math.atan2(by - cy, bx - cx)
    delta = (end_angle - start_angle) % TWO_PI
    if delta <= math.pi:
        direction, sweep = 1, delta
    else:
        direction, sweep = -1, TWO_PI - delta
    return ArcGeometry(Point2D(cx, cy), radius, start_angle, sweep, direction)


def dist_point_arc(q: Point2D, arc: AnchoredArc, poly: Polyline) -> float:
    """Distance from ``q`` to the closed arc.

    Inside the swept sector this is the radial residual; outside it is the
    distance to the nearer anchor.
    """
    g = arc_geometry(arc, poly)
    dx = q[0] - g.center[0]
    dy = q[1] - g.center[1]
    alpha = (g.direction * (math.atan2(dy, dx) - g.start_angle)) % TWO_PI
    if alpha <= g.sweep:
        return abs(math.hypot(dx, dy) - g.radius)
    a = poly[arc.start_idx]
    b = poly[arc.end_idx]
    return min(math.hypot(q[0] - a.x, q[1] - a.y), math.hypot(q[0] - b.x, q[1] - b.y))


def arc_distances(
    geom: ArcGeometry,
    xs: np.ndarray,
    ys: np.ndarray,
    ax: float,
    ay: float,
    bx: float,
    by: float,
) -> np.ndarray:
    """Vectorized exact distance from points to the closed arc."""
    dx = xs - geom.center[0]
    dy = ys - geom.center[1]
    rho = np.hypot(dx, dy)
    alpha = (geom.direction * (np.arctan2(dy, dx) - geom.start_angle)) % TWO_PI
    inside = alpha <= geom.sweep
    d_end = np.minimum(np.hypot(xs - ax, ys - ay), np.hypot(xs - bx, ys - by))
    return np.where(inside, np.abs(rho - geom.radius), d_end)


def _interior(poly: Polyline, k: int, i: int) -> tuple[np.ndarray, np.ndarray]:
    if not 0 <= k < i < poly.n:
        raise ValueError(f"bad anchor pair ({k}, {i})")
    return poly.xs[k + 1 : i], poly.ys[k + 1 : i]


def max_deviation(poly: Polyline, k: int, i: int, prim: Primitive) -> float:
    """Largest exact distance from the interior vertices to the primitive."""
    xs, ys = _interior(poly, k, i)
    if xs.shape[0] == 0:
        return 0.0
    ax, ay = float(poly.xs[k]), float(poly.ys[k])
    bx, by = float(poly.xs[i]), float(poly.ys[i])
    if isinstance(prim, AnchoredSegment):
        return float(np.sqrt(_segment_sq_residuals(xs, ys, ax, ay, bx, by).max()))
    g = arc_geometry(prim, poly)
    return float(arc_distances(g, xs, ys, ax, ay, bx, by).max())


def sse(poly: Polyline, k: int, i: int, prim: Primitive) -> float:
    """Sum of squared deviations of interior vertices from the primitive.

    Segments use the exact distance to the closed chord.  Arcs use the
    radial residual ``(|v - center| - radius)^2``, the standard
    approximation of the squared arc deviation.
    """
    xs, ys = _interior(poly, k, i)
    if xs.shape[0] == 0:
        return 0.0
    ax, ay = float(poly.xs[k]), float(poly.ys[k])
    bx, by = float(poly.xs[i]), float(poly.ys[i])
    if isinstance(prim, AnchoredSegment):
        return float(_segment_sq_residuals(xs, ys, ax, ay, bx, by).sum())
    g = arc_geometry(prim, poly)
    res = np.hypot(xs - g.center[0], ys - g.center[1]) - g.radius
    return float(np.dot(res, res))


def _segment_sq_residuals(
    xs: np.ndarray,
    ys: np.ndarray,
    ax: float,
    ay: float,
    bx: float,
    by: float,
) -> np.ndarray:
    """Squared distances from points to the closed segment (a, b)."""
    dx = bx - ax
    dy = by - ay
    l2 = dx * dx + dy * dy
    px = xs - ax
    py = ys - ay
    if l2 == 0.0:
        return px * px + py * py
    t = np.clip((px * dx + py * dy) / l2, 0.0, 1.0)
    rx = px - t * dx
    ry = py - t * dy
    return rx * rx + ry * ry
