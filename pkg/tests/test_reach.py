import math

import numpy as np
import pytest

from polyarc.fitting import fit_arc, fit_segment
from polyarc.geometry import Polyline
from polyarc.oracle import oracle_reach, random_instances
from polyarc.reach import (
    compute_bw,
    compute_fw_arc,
    compute_fw_seg,
    compute_tables,
    loosest_tables,
)

from conftest import quarter_circle_polyline, vee_polyline


def test_fw_seg_collinear():
    poly = Polyline([(i, 0.0) for i in range(12)])
    fw = compute_fw_seg(poly, 0.5)
    assert (fw == 11).all()


def test_fw_seg_last_pairs():
    poly = vee_polyline()
    fw = compute_fw_seg(poly, 2.0)
    n = poly.n
    assert fw[n - 2] == n - 1
    assert fw[n - 1] == n - 1
    # a line through p_0 can cover the first leg and a bit of the second,
    # but never disks on both legs all the way to the end
    assert 10 <= fw[0] < 20


def test_fw_arc_circle_fixture():
    poly = quarter_circle_polyline()
    fw = compute_fw_arc(poly, 0.01)
    assert fw[0] >= 18


def test_fw_arc_four_point_circle():
    pts = [(math.cos(t), math.sin(t)) for t in (0.0, 0.4, 0.8, 1.2)]
    poly = Polyline(pts)
    fw = compute_fw_arc(poly, 0.01)
    assert fw[0] >= 3


def test_fw_arc_stops_at_s_curve():
    # two opposite-curvature half circles; small tolerance
    up = [(math.cos(t), math.sin(t)) for t in np.linspace(math.pi, 0, 24)]
    down = [
        (2.0 - math.cos(t), -math.sin(t)) for t in np.linspace(math.pi, 0, 24)[1:]
    ]
    poly = Polyline(up + down)
    tol = 0.01
    fw = compute_fw_arc(poly, tol)
    n = poly.n
    assert fw[0] < n - 1
    # soundness at the boundary: nothing past fw[0] admits an anchored arc
    for m in range(int(fw[0]) + 1, n):
        assert fit_arc(poly, 0, m, tol) is None


def test_reach_soundness_exhaustive(rng):
    for poly in random_instances(3121, 6, (8, 36), "mixed"):
        tol = 0.12
        tables = compute_tables(poly, tol)
        n = poly.n
        for i in range(n):
            for m in range(int(tables.fw_seg[i]) + 1, n):
                assert fit_segment(poly, i, m, tol) is None
            for m in range(max(i + 3, int(tables.fw_arc[i]) + 1), n):
                assert fit_arc(poly, i, m, tol) is None
            for k in range(0, int(tables.bw_seg[i])):
                assert fit_segment(poly, k, i, tol) is None
            for k in range(0, min(i - 2, int(tables.bw_arc[i]))):
                assert fit_arc(poly, k, i, tol) is None


def test_reach_oracle_never_exceeds_tables(rng):
    for poly in random_instances(555, 4, (8, 30), "smooth"):
        tol = 0.1
        tables = compute_tables(poly, tol)
        for i in range(poly.n):
            seg_reach, arc_reach = oracle_reach(poly, tol, i)
            assert seg_reach <= tables.fw_seg[i]
            assert arc_reach <= tables.fw_arc[i]


def test_bw_is_mapped_fw_of_reverse():
    poly = vee_polyline()
    tol = 2.0
    bw_seg, bw_arc = compute_bw(poly, tol)
    rev = poly.reversed()
    n = poly.n
    fw_seg_rev = compute_fw_seg(rev, tol)
    fw_arc_rev = compute_fw_arc(rev, tol)
    assert (bw_seg == (n - 1) - fw_seg_rev[::-1]).all()
    assert (bw_arc == (n - 1) - fw_arc_rev[::-1]).all()
    # mirrored vee: bw of the last vertex reaches at most the apex
    assert bw_seg[n - 1] <= 10
    assert bw_seg[1] == 0


def test_palindrome_symmetry():
    poly = vee_polyline()  # geometrically symmetric
    tol = 2.0
    tables = compute_tables(poly, tol)
    n = poly.n
    assert (tables.bw_seg == (n - 1) - tables.fw_seg[::-1]).all()


def test_loosest_tables():
    poly = vee_polyline()
    t = loosest_tables(poly)
    assert (t.fw_seg == poly.n - 1).all()
    assert (t.fw_arc == poly.n - 1).all()
    assert (t.bw_seg == 0).all()
    assert (t.bw_arc == 0).all()
