"""Synthetic benchmark corpora.

Two generators: a chain of semicircular arches joined on a common baseline,
and a zigzag of unit segments.  Both are seeded and deterministic: one PCG64
child stream per primitive (spawn key = primitive index), noise drawn as
uniform deviates and applied to interior samples only, so the joins stay
exact and every noisy sample remains within the stated magnitude of its
true primitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Polyline


@dataclass(frozen=True)
class CorpusSpec:
    kind: str  # "arcs" | "zigzag"
    count: int = 100
    scale: float = 1.0  # arc radius or segment length
    points_per_primitive: int = 64
    noise: float = 0.05
    seed: int = 42

    def __post_init__(self):
        if self.kind not in ("arcs", "zigzag"):
            raise ValueError(f"unknown corpus kind {self.kind!r}")
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.points_per_primitive < 2:
            raise ValueError("points_per_primitive must be >= 2")
        if self.noise < 0:
            raise ValueError("noise must be nonnegative")


def generate(spec: CorpusSpec) -> Polyline:
    if spec.kind == "arcs":
        return gen_arcs(spec)
    return gen_zigzag(spec)


def gen_arcs(spec: CorpusSpec) -> Polyline:
    """Semicircular arches of radius ``scale`` marching along the baseline.

    Arch j spans x in [(2j+1) r, (2j+3) r] with center ((2j+2) r, r), bulging
    upward; each arch is sampled at equal angular steps from 180 to 0
    degrees and interior samples are perturbed radially by U[-noise, noise].
    Join vertices are shared, not duplicated.
    """
    if spec.kind != "arcs":
        raise ValueError("spec.kind must be 'arcs'")
    r = spec.scale
    m = spec.points_per_primitive
    root = np.random.SeedSequence(spec.seed)
    blocks = []
    step = math.pi / m
    for j, child in enumerate(root.spawn(spec.count)):
        rng = np.random.default_rng(child)
        first = 0 if j == 0 else 1  # share the join with the previous arch
        idx = np.arange(first, m + 1)
        ang = math.pi - idx * step
        rad = np.full(idx.shape, float(r))
        deviates = rng.uniform(-spec.noise, spec.noise, size=idx.shape)
        interior = (idx > 0) & (idx < m)
        rad += np.where(interior, deviates, 0.0)
        cx = (2 * j + 2) * r
        blocks.append(np.stack([cx + rad * np.cos(ang), r + rad * np.sin(ang)], axis=1))
    return Polyline(np.vstack(blocks))


def gen_zigzag(spec: CorpusSpec) -> Polyline:
    """Unit-length legs alternating +45/-45 degrees with perpendicular noise.

    Each leg is sampled at equal steps; interior samples are shifted along
    the leg normal by U[-noise, noise]; apex vertices are shared and exact.
    """
    if spec.kind != "zigzag":
        raise ValueError("spec.kind must be 'zigzag'")
    length = spec.scale
    m = spec.points_per_primitive
    root = np.random.SeedSequence(spec.seed)
    blocks = []
    origin = np.zeros(2)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for j, child in enumerate(root.spawn(spec.count)):
        rng = np.random.default_rng(child)
        d = np.array([inv_sqrt2, inv_sqrt2 if j % 2 == 0 else -inv_sqrt2]) * length
        nrm = np.array([-d[1], d[0]]) / length
        first = 0 if j == 0 else 1
        frac = np.arange(first, m + 1) / m
        deviates = rng.uniform(-spec.noise, spec.noise, size=frac.shape)
        interior = (frac > 0.0) & (frac < 1.0)
        offs = np.where(interior, deviates, 0.0)
        pts = origin + frac[:, None] * d + offs[:, None] * nrm
        blocks.append(pts)
        origin = origin + d
    return Polyline(np.vstack(blocks))
