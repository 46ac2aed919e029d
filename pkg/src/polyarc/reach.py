"""Sound reach bounds for anchored fits.

``fw_seg[i]`` is an index such that no segment anchored at vertex ``i`` can
be fitted to any vertex beyond it; ``fw_arc`` is the arc analogue and the
``bw_*`` arrays mirror them backward.  The bounds may overestimate the true
reach (that only lengthens jumps) but never underestimate it.

Segments use a relaxation: a feasible chord (i, m) lies on a line through
``p_i`` stabbing every tolerance disk on the way, so once no such line
exists the reach has certainly ended.  The feasible direction set is
maintained as a conservative hull interval (mod pi).

Arcs use the inversion trick: circles through ``p_i`` map to straight lines
under inversion centered at ``p_i``, and tolerance disks (kept only when
they clear the center comfortably) map to disks, reducing the question to
line stabbing.  Infeasibility is certified over a grid of line directions
with a Lipschitz margin, so "infeasible" is always exact while "feasible"
may be optimistic - the sound direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Polyline, validate_tolerance

_ARC_DIRECTIONS = 64
_ARC_SKIP_FACTOR = 2.0  # disks within skip_factor*tol of the center are dropped
_CHUNK0 = 16


@dataclass(frozen=True)
class ReachTables:
    fw_seg: np.ndarray
    fw_arc: np.ndarray
    bw_seg: np.ndarray
    bw_arc: np.ndarray

    @property
    def n(self) -> int:
        return int(self.fw_seg.shape[0])


def compute_fw_seg(poly: Polyline, tol: float) -> np.ndarray:
    """Forward segment reach per vertex: running-max envelope of the raw reach.

    The envelope is what the maximum-jump step relies on: the frontier entry
    consulted for a jump must bound the reach of every vertex at or before
    it, and raw per-vertex reach is not monotone under noise.  The envelope
    is still sound per vertex (it only overestimates).
    """
    return np.maximum.accumulate(_fw_seg_raw(poly, tol))


def _fw_seg_raw(poly: Polyline, tol: float) -> np.ndarray:
    tol = validate_tolerance(tol)
    n = poly.n
    xs, ys = poly.xs, poly.ys
    out = np.empty(n, dtype=np.int64)
    tol2 = tol * tol
    for i in range(n):
        lo = hi = None
        reach = n - 1
        j = i + 1
        chunk = _CHUNK0
        while j < n:
            end = min(n, j + chunk)
            dx = xs[j:end] - xs[i]
            dy = ys[j:end] - ys[i]
            d2 = dx * dx + dy * dy
            keep = (d2 > tol2).tolist()
            phis = np.mod(np.arctan2(dy, dx), math.pi).tolist()
            alphas = np.arcsin(
                np.minimum(1.0, tol / np.sqrt(np.maximum(d2, 1e-300)))
            ).tolist()
            failed = -1
            for off in range(end - j):
                if not keep[off]:
                    continue
                phi = phis[off]
                alpha = alphas[off]
                if lo is None:
                    lo, hi = phi - alpha, phi + alpha
                    continue
                mid = 0.5 * (lo + hi)
                delta = phi + math.pi * round((mid - phi) / math.pi)
                a_lo = max(lo, delta - alpha)
                a_hi = min(hi, delta + alpha)
                delta2 = delta - math.pi if delta >= mid else delta + math.pi
                b_lo = max(lo, delta2 - alpha)
                b_hi = min(hi, delta2 + alpha)
                ok_a = a_lo <= a_hi
                ok_b = b_lo <= b_hi
                if ok_a and ok_b:
                    lo, hi = min(a_lo, b_lo), max(a_hi, b_hi)
                elif ok_a:
                    lo, hi = a_lo, a_hi
                elif ok_b:
                    lo, hi = b_lo, b_hi
                else:
                    failed = j + off
                    break
            if failed >= 0:
                reach = failed - 1
                break
            j = end
            chunk *= 2
        out[i] = reach
    return out


def compute_fw_arc(poly: Polyline, tol: float) -> np.ndarray:
    """Forward arc reach per vertex: running-max envelope, via inversion.

    See compute_fw_seg for why the envelope is taken.
    """
    return np.maximum.accumulate(_fw_arc_raw(poly, tol))


def _fw_arc_raw(poly: Polyline, tol: float) -> np.ndarray:
    tol = validate_tolerance(tol)
    n = poly.n
    xs, ys = poly.xs, poly.ys
    out = np.empty(n, dtype=np.int64)
    angles = np.arange(_ARC_DIRECTIONS) * (math.pi / _ARC_DIRECTIONS)
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)  # (K, 2)
    half_sector = math.pi / (2 * _ARC_DIRECTIONS)
    skip2 = (_ARC_SKIP_FACTOR * tol) ** 2
    tol2 = tol * tol

    for i in range(n):
        reach = n - 1
        run_max = np.full(_ARC_DIRECTIONS, -np.inf)
        run_min = np.full(_ARC_DIRECTIONS, np.inf)
        kept_chunks: list[tuple[np.ndarray, np.ndarray]] = []
        kept_js: list[np.ndarray] = []
        j = i + 1
        chunk = _CHUNK0
        failed_chunk = False
        while j < n:
            end = min(n, j + chunk)
            dx = xs[j:end] - xs[i]
            dy = ys[j:end] - ys[i]
            d2 = dx * dx + dy * dy
            keep = d2 > skip2
            if keep.any():
                denom = d2[keep] - tol2
                ox = dx[keep] / denom
                oy = dy[keep] / denom
                # disk radius inflated by the per-row direction sensitivity,
                # so "no stabbing offset in any sector" is an exact certificate
                r_eff = tol / denom + np.hypot(ox, oy) * half_sector
                dots = ox[:, None] * dirs[:, 0] + oy[:, None] * dirs[:, 1]
                lo_rows = dots - r_eff[:, None]
                hi_rows = dots + r_eff[:, None]
                kept_chunks.append((lo_rows, hi_rows))
                kept_js.append(np.arange(j, end)[keep])
                run_max = np.maximum(run_max, lo_rows.max(axis=0))
                run_min = np.minimum(run_min, hi_rows.min(axis=0))
                if float((run_max - run_min).min()) > 0.0:
                    failed_chunk = True
                    break
            j = end
            chunk *= 2
        if failed_chunk:
            # locate the first prefix certified infeasible among kept rows
            lo_all = np.concatenate([c[0] for c in kept_chunks], axis=0)
            hi_all = np.concatenate([c[1] for c in kept_chunks], axis=0)
            js = np.concatenate(kept_js)
            cum_max = np.maximum.accumulate(lo_all, axis=0)
            cum_min = np.minimum.accumulate(hi_all, axis=0)
            gaps = (cum_max - cum_min).min(axis=1)
            bad = gaps > 0.0
            first = int(np.argmax(bad))
            # argmax returns 0 when nothing is True; the chunk test guarantees
            # the final row is certified
            if not bad[first]:
                first = bad.shape[0] - 1
            # adding constraints only widens gaps, so certified infeasibility
            # must persist over every longer prefix
            assert bool(bad[first:].all()), "stabbing certificate lost monotonicity"
            reach = int(js[first]) - 1
        out[i] = reach
    return out


def compute_bw(poly: Polyline, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Backward reach tables, by running the forward pass on the reversed polyline."""
    rev = poly.reversed()
    n = poly.n
    bw_seg = (n - 1) - compute_fw_seg(rev, tol)[::-1]
    bw_arc = (n - 1) - compute_fw_arc(rev, tol)[::-1]
    return bw_seg, bw_arc


def compute_tables(poly: Polyline, tol: float) -> ReachTables:
    fw_seg = compute_fw_seg(poly, tol)
    fw_arc = compute_fw_arc(poly, tol)
    bw_seg, bw_arc = compute_bw(poly, tol)
    return ReachTables(fw_seg, fw_arc, bw_seg, bw_arc)


def loosest_tables(poly: Polyline) -> ReachTables:
    """Trivially sound tables: forward reach n-1, backward reach 0 everywhere."""
    n = poly.n
    return ReachTables(
        np.full(n, n - 1, dtype=np.int64),
        np.full(n, n - 1, dtype=np.int64),
        np.zeros(n, dtype=np.int64),
        np.zeros(n, dtype=np.int64),
    )
