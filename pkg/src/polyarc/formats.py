"""Input parsing and output encoding for the CLI."""

from __future__ import annotations

import json
import math
import warnings
from pathlib import Path

import numpy as np

from .geometry import AnchoredArc, Polyline, arc_geometry, collapse_duplicates, max_deviation
from .solver import CompressedPolyline


class ParseError(ValueError):
    pass


def ingest(path: str | Path, fmt: str = "csv") -> Polyline:
    """Read a polyline from a csv of "x,y" rows or a GeoJSON LineString.

    Consecutive near-duplicate vertices are collapsed (with a warning);
    fewer than two distinct vertices is an error.
    """
    path = Path(path)
    if fmt == "csv":
        raw = _read_csv(path)
    elif fmt == "geojson":
        raw = _read_geojson(path)
    else:
        raise ParseError(f"unknown input format {fmt!r}")
    if len(raw) < 2:
        raise ParseError(f"{path}: need at least 2 vertices, got {len(raw)}")
    pts, removed = collapse_duplicates(np.asarray(raw, dtype=float))
    if removed:
        warnings.warn(f"{path}: collapsed {removed} duplicate vertices", stacklevel=2)
    if pts.shape[0] < 2:
        raise ParseError(f"{path}: degenerate polyline after duplicate collapse")
    return Polyline(pts)


def _read_csv(path: Path) -> list[tuple[float, float]]:
    out = []
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"{path}:{lineno}: expected 'x,y', got {line!r}")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ParseError(f"{path}:{lineno}: non-finite coordinate")
        out.append((x, y))
    if not out:
        raise ParseError(f"{path}: empty input")
    return out


def _read_geojson(path: Path) -> list[tuple[float, float]]:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    geom = doc
    if isinstance(doc, dict) and doc.get("type") == "FeatureCollection":
        feats = [
            f
            for f in doc.get("features", [])
            if isinstance(f.get("geometry"), dict)
            and f["geometry"].get("type") == "LineString"
        ]
        if not feats:
            raise ParseError(f"{path}: no LineString feature found")
        geom = feats[0]["geometry"]
    elif isinstance(doc, dict) and doc.get("type") == "Feature":
        geom = doc.get("geometry") or {}
    if not (isinstance(geom, dict) and geom.get("type") == "LineString"):
        raise ParseError(f"{path}: expected a LineString geometry")
    coords = geom.get("coordinates")
    if not isinstance(coords, list):
        raise ParseError(f"{path}: LineString without coordinates")
    out = []
    for c in coords:
        if not (isinstance(c, (list, tuple)) and len(c) >= 2):
            raise ParseError(f"{path}: bad coordinate entry {c!r}")
        out.append((float(c[0]), float(c[1])))
    return out


def write_polyline_csv(poly: Polyline, path: str | Path) -> None:
    """Write "x,y" rows using shortest round-trip float formatting (lossless)."""
    lines = [f"{repr(float(x))},{repr(float(y))}" for x, y in zip(poly.xs, poly.ys)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def encode_output(result: CompressedPolyline, poly: Polyline) -> dict:
    """Structured document for a compression result.

    Arc records carry center, radius, orientation sign and the center offset
    (sagitta parameter) so the geometry round-trips without refitting.
    """
    prims = []
    worst = 0.0
    for placed in result.primitives:
        prim = placed.prim
        dev = max_deviation(poly, prim.start_idx, prim.end_idx, prim)
        worst = max(worst, dev)
        rec = {
            "start_index": int(prim.start_idx),
            "end_index": int(prim.end_idx),
            "sse": float(placed.sse),
            "max_deviation": float(dev),
        }
        if isinstance(prim, AnchoredArc):
            g = arc_geometry(prim, poly)
            rec["type"] = "arc"
            rec["center_x"] = g.center.x
            rec["center_y"] = g.center.y
            rec["radius"] = g.radius
            rec["orientation"] = int(g.direction)
            rec["sagitta"] = float(prim.center_offset)
        else:
            rec["type"] = "segment"
        prims.append(rec)
    return {
        "vertex_count": poly.n,
        "primitives": prims,
        "totals": {
            "penalty": int(result.total_penalty),
            "sse": float(result.total_sse),
            "max_deviation": float(worst),
        },
    }


def to_svg(poly: Polyline, result: CompressedPolyline | None = None, width: int = 800) -> str:
    """SVG overlay: source vertices in gray, primitives as line/arc paths."""
    xs, ys = poly.xs, poly.ys
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    span = max(x1 - x0, y1 - y0, 1e-9)
    margin = 0.05 * span
    scale = width / (span + 2 * margin)
    height = int((y1 - y0 + 2 * margin) * scale) + 1

    def sx(x):
        return (x - x0 + margin) * scale

    def sy(y):
        return (y1 - y + margin) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
    parts.append(
        f'<polyline points="{pts}" fill="none" stroke="#bbbbbb" stroke-width="1"/>'
    )
    r_dot = max(1.0, width / 400)
    for x, y in zip(xs, ys):
        parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="{r_dot:.1f}" fill="#888888"/>')
    if result is not None:
        for placed in result.primitives:
            prim = placed.prim
            x_a, y_a = float(xs[prim.start_idx]), float(ys[prim.start_idx])
            x_b, y_b = float(xs[prim.end_idx]), float(ys[prim.end_idx])
            if isinstance(prim, AnchoredArc):
                g = arc_geometry(prim, poly)
                rr = g.radius * scale
                # y is flipped, so a counterclockwise arc needs sweep-flag 0
                flag = 0 if g.direction > 0 else 1
                parts.append(
                    f'<path d="M {sx(x_a):.2f} {sy(y_a):.2f} '
                    f'A {rr:.2f} {rr:.2f} 0 0 {flag} {sx(x_b):.2f} {sy(y_b):.2f}" '
                    f'fill="none" stroke="#d62728" stroke-width="2"/>'
                )
            else:
                parts.append(
                    f'<path d="M {sx(x_a):.2f} {sy(y_a):.2f} L {sx(x_b):.2f} {sy(y_b):.2f}" '
                    f'fill="none" stroke="#1f77b4" stroke-width="2"/>'
                )
    parts.append("</svg>")
    return "\n".join(parts)
