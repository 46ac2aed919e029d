import math

import numpy as np
import pytest

from polyarc.geometry import Polyline


def vee_polyline(spacing: float = 3.0) -> Polyline:
    """21-vertex V shape: two collinear legs of 10 steps meeting at vertex 10.

    Neighboring vertices are ``spacing`` apart; legs run at -45/+45 degrees.
    """
    step = spacing / math.sqrt(2.0)
    pts = [(step * i, -step * i) for i in range(11)]
    pts += [(step * (10 + i), step * (-10 + i)) for i in range(1, 11)]
    return Polyline(pts)


def quarter_circle_polyline() -> Polyline:
    """19 unit-circle vertices from 180 to 90 degrees in 5-degree steps."""
    pts = [
        (math.cos(math.radians(180 - 5 * j)), math.sin(math.radians(180 - 5 * j)))
        for j in range(19)
    ]
    return Polyline(pts)


@pytest.fixture
def vee():
    return vee_polyline()


@pytest.fixture
def quarter_circle():
    return quarter_circle_polyline()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
