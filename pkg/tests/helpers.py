"""Shared test helpers: fixture access, cached pipeline runs, strategies."""

from __future__ import annotations

import random
from functools import lru_cache

from hypothesis import strategies as st

from gridforge.cli import fixture_expectations, fixtures
from gridforge.griddata import GridDiagram
from gridforge.invariants import compute_g0
from gridforge.regions import Region

FIXTURES = fixtures()
EXPECT = fixture_expectations()
SMALL = [k for k, g in FIXTURES.items() if g.n <= 5]

# G_0 of the positive side as printed in the tables
TABLE_G0 = {
    "unknot2": [(0, 0)],
    "trefoil": [(0, 1), (1, 0)],
    "T25": [(0, 2), (1, 1), (2, 0)],
    "T34": [(0, 3), (1, 1), (3, 0)],
    "T35": [(0, 4), (1, 2), (2, 1), (4, 0)],
}


def simple_regions(corners):
    return sorted(Region.simple(i, j) for i, j in corners)


@lru_cache(maxsize=None)
def g0_result(name: str):
    return compute_g0(FIXTURES[name])


def torus(n: int, p: int) -> GridDiagram:
    return GridDiagram.from_lists(range(n), [(i + p) % n for i in range(n)]).mirror()


def rotate(g: GridDiagram, k: int, r: int) -> GridDiagram:
    """Cyclic column shift by k and row shift by r; same knot."""
    n = g.n
    return GridDiagram.from_lists([(g.o_rows[(c + k) % n] + r) % n for c in range(n)],
                                  [(g.x_rows[(c + k) % n] + r) % n for c in range(n)])


def random_grid(n: int, rng: random.Random) -> GridDiagram:
    o = list(range(n))
    rng.shuffle(o)
    # x = o after an n-cycle, which makes a knot with no shared squares
    order = list(range(n))
    rng.shuffle(order)
    w = [0] * n
    for a, b in zip(order, order[1:] + order[:1]):
        w[a] = b
    return GridDiagram.from_lists(o, [o[w[c]] for c in range(n)])


@st.composite
def grids(draw, min_n: int = 2, max_n: int = 6):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_grid(n, random.Random(seed))


@st.composite
def regions(draw, lo: int = -4, hi: int = 4, max_corners: int = 4):
    pts = draw(st.lists(st.tuples(st.integers(lo, hi), st.integers(lo, hi)), min_size=1, max_size=max_corners))
    return Region(tuple(pts))
