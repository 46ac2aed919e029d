import math

import numpy as np
import pytest

from polyarc.fitting import (
    FitCounter,
    feasible_h_interval,
    fit_arc,
    fit_segment,
)
from polyarc.geometry import (
    AnchoredArc,
    Point2D,
    Polyline,
    arc_geometry,
    dist_point_arc,
    max_deviation,
)

from conftest import quarter_circle_polyline, vee_polyline


def circle_distance(v, k, i, h, poly):
    """Distance from v to the full circle through anchors k, i at offset h."""
    a = poly[k]
    b = poly[i]
    length = math.dist(a, b)
    nx, ny = -(b.y - a.y) / length, (b.x - a.x) / length
    cx = 0.5 * (a.x + b.x) + h * nx
    cy = 0.5 * (a.y + b.y) + h * ny
    r = math.hypot(h, 0.5 * length)
    return abs(math.dist(v, (cx, cy)) - r)


def test_fit_segment_vee():
    poly = vee_polyline()
    fit = fit_segment(poly, 0, 10, 2.0)
    assert fit is not None
    assert fit.sse == pytest.approx(0.0, abs=1e-18)
    assert fit_segment(poly, 0, 20, 2.0) is None
    adj = fit_segment(poly, 4, 5, 2.0)
    assert adj is not None and adj.sse == 0.0 and adj.max_dev == 0.0


def test_fit_segment_max_dev_bound(rng):
    for _ in range(100):
        pts = np.cumsum(rng.normal(size=(12, 2)), axis=0)
        poly = Polyline(pts)
        tol = float(rng.uniform(0.1, 2.0))
        fit = fit_segment(poly, 0, 11, tol)
        if fit is not None:
            assert fit.max_dev <= tol
            assert fit.max_dev == pytest.approx(
                max_deviation(poly, 0, 11, fit.prim), rel=1e-12, abs=1e-15
            )


def test_fit_arc_quarter_circle():
    poly = quarter_circle_polyline()
    fit = fit_arc(poly, 0, 18, 0.01)
    assert fit is not None
    g = arc_geometry(fit.prim, poly)
    assert g.center == pytest.approx((0.0, 0.0), abs=1e-9)
    assert g.radius == pytest.approx(1.0, abs=1e-9)
    assert fit.sse <= 1e-18


def test_fit_arc_collinear_rejected():
    poly = Polyline([(0, 0), (1, 0), (2, 0), (3, 0)])
    assert fit_arc(poly, 0, 3, 0.05) is None


def test_fit_arc_requires_min_vertices():
    poly = Polyline([(0, 0), (1, 1), (2, 0)])
    assert fit_arc(poly, 0, 2, 1.0) is None


def test_fit_arc_noisy_semicircle(rng):
    # full upper semicircle of radius 1 with +-0.05 radial noise, anchors exact
    m = 64
    angles = np.pi - np.arange(m + 1) * (np.pi / m)
    radii = np.ones(m + 1)
    radii[1:-1] += rng.uniform(-0.05, 0.05, size=m - 1)
    pts = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
    poly = Polyline(pts)
    fit = fit_arc(poly, 0, m, 0.06)
    assert fit is not None
    g = arc_geometry(fit.prim, poly)
    assert 0.93 <= g.radius <= 1.07
    assert fit.max_dev <= 0.06


def test_fit_arc_verified_exactly(rng):
    for _ in range(100):
        pts = np.cumsum(rng.normal(size=(8, 2)) * 0.5, axis=0)
        try:
            poly = Polyline(pts)
        except ValueError:
            continue
        tol = float(rng.uniform(0.05, 1.0))
        fit = fit_arc(poly, 0, 7, tol)
        if fit is not None:
            dev = max_deviation(poly, 0, 7, fit.prim)
            assert dev <= tol
            assert fit.max_dev == pytest.approx(dev, rel=1e-12, abs=1e-15)


def test_fit_reversal_symmetry(rng):
    agree = 0
    for _ in range(150):
        pts = np.cumsum(rng.normal(size=(9, 2)) * 0.7, axis=0)
        try:
            poly = Polyline(pts)
        except ValueError:
            continue
        rev = poly.reversed()
        tol = float(rng.uniform(0.1, 1.5))
        f_seg = fit_segment(poly, 0, 8, tol)
        r_seg = fit_segment(rev, 0, 8, tol)
        assert (f_seg is None) == (r_seg is None)
        if f_seg is not None:
            assert f_seg.sse == pytest.approx(r_seg.sse, rel=1e-9, abs=1e-12)
        f_arc = fit_arc(poly, 0, 8, tol)
        r_arc = fit_arc(rev, 0, 8, tol)
        assert (f_arc is None) == (r_arc is None)
        if f_arc is not None:
            assert f_arc.sse == pytest.approx(r_arc.sse, rel=1e-6, abs=1e-9)
            agree += 1
    assert agree >= 5


def test_feasible_h_interval_three_point_pinch():
    # v=(0,1) with anchors (-1,0),(1,0): as tol -> 0 only h=0 survives
    poly = Polyline([(-1, 0), (0, 1), (1, 0)])
    iv = feasible_h_interval(Point2D(0.0, 1.0), 0, 2, 1e-9, poly)
    assert not iv.empty and not iv.wraps
    assert iv.lo == pytest.approx(0.0, abs=1e-8)
    assert iv.hi == pytest.approx(0.0, abs=1e-8)


def test_feasible_h_interval_near_midpoint_unbounded():
    poly = Polyline([(-1, 0), (0.0, 0.001), (1, 0)])
    iv = feasible_h_interval(Point2D(0.0, 0.001), 0, 2, 1.0, poly)
    # every circle through the anchors passes within 1 of the chord midpoint area
    for h in (-1e6, -3.0, 0.0, 3.0, 1e6):
        assert iv.contains(h)


def test_feasible_h_interval_vs_dense_sampling(rng):
    # 4096 samples of the compactified parameter per instance, vectorized
    for _ in range(60):
        a, b = rng.normal(size=(2, 2)) * 2
        length = math.dist(a, b)
        if length < 0.3:
            continue
        v = rng.normal(size=2) * 2
        poly = Polyline([tuple(a), (50.0, 60.0), tuple(b)])
        tol = float(rng.uniform(0.05, 0.8))
        iv = feasible_h_interval(Point2D(*v), 0, 2, tol, poly)
        thetas = np.linspace(-math.pi / 2 + 1e-6, math.pi / 2 - 1e-6, 4096)
        hs = length * np.tan(thetas)
        nx, ny = -(b[1] - a[1]) / length, (b[0] - a[0]) / length
        cx = 0.5 * (a[0] + b[0]) + hs * nx
        cy = 0.5 * (a[1] + b[1]) + hs * ny
        dist = np.abs(np.hypot(v[0] - cx, v[1] - cy) - np.hypot(hs, 0.5 * length))
        margin = 1e-7 * (1 + np.abs(hs))
        inside = np.array([iv.contains(float(h)) for h in hs])
        assert not np.any((dist <= tol - margin) & ~inside)
        assert not np.any((dist >= tol + margin) & inside)


def test_feasible_h_interval_short_chord(rng):
    # chord shorter than the tolerance diameter exercises the band fallback
    for _ in range(40):
        a = rng.normal(size=2)
        b = a + rng.normal(size=2) * 0.05
        if math.dist(a, b) < 1e-3:
            continue
        v = a + rng.normal(size=2) * 0.2
        poly = Polyline([tuple(a), (50.0, 60.0), tuple(b)])
        tol = 0.15
        if math.dist(v, a) <= tol or math.dist(v, b) <= tol:
            continue
        iv = feasible_h_interval(Point2D(*v), 0, 2, tol, poly)
        length = math.dist(a, b)
        for theta in np.linspace(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3, 257):
            h = length * math.tan(theta)
            d = circle_distance(tuple(v), 0, 2, h, poly)
            margin = 1e-7 * (1 + abs(h))
            if d <= tol - margin:
                assert iv.contains(h)
            elif d >= tol + margin:
                assert not iv.contains(h)


def test_fit_arc_sse_matches_unconstrained_minimum(rng):
    # with a huge tolerance the returned sse must equal the 1-D optimum
    for _ in range(40):
        m = 10
        angles = np.linspace(0.4, 2.2, m)
        radii = 2.0 + rng.uniform(-0.05, 0.05, size=m)
        pts = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
        poly = Polyline(pts)
        fit = fit_arc(poly, 0, m - 1, 50.0)
        assert fit is not None
        # golden-section reference on the radial objective
        a = poly[0]
        b = poly[m - 1]
        length = math.dist(a, b)

        def radial_sse(h):
            nx, ny = -(b.y - a.y) / length, (b.x - a.x) / length
            cx = 0.5 * (a.x + b.x) + h * nx
            cy = 0.5 * (a.y + b.y) + h * ny
            r = math.hypot(h, 0.5 * length)
            res = np.hypot(poly.xs[1 : m - 1] - cx, poly.ys[1 : m - 1] - cy) - r
            return float(np.dot(res, res))

        lo, hi = -20.0, 20.0
        phi = (math.sqrt(5) - 1) / 2
        x1 = hi - phi * (hi - lo)
        x2 = lo + phi * (hi - lo)
        f1, f2 = radial_sse(x1), radial_sse(x2)
        for _ in range(200):
            if f1 <= f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - phi * (hi - lo)
                f1 = radial_sse(x1)
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + phi * (hi - lo)
                f2 = radial_sse(x2)
        best = min(f1, f2)
        assert fit.sse <= best * (1 + 1e-9) + 1e-15


def test_fit_counter_duplicates():
    poly = vee_polyline()
    ctx = FitCounter(poly.n)
    fit_segment(poly, 0, 10, 2.0, ctx=ctx)
    fit_segment(poly, 0, 11, 2.0, ctx=ctx)
    assert ctx.totals() == (2, 0, 0)
    fit_segment(poly, 0, 10, 2.0, ctx=ctx)
    assert ctx.totals() == (3, 0, 1)
    fit_arc(poly, 0, 10, 2.0, ctx=ctx)
    assert ctx.totals()[1] == 1
