"""Slow reference implementations for tests.

Nothing here uses the production state table, rectangle code, solver or
pentagon maps: states come from itertools, gradings from the bilinear
form with exact fractions, rectangles from scanning unit squares, and
linear algebra from dense numpy elimination.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .griddata import GridDiagram
from .regions import Region

MAX_N = 5

Gen = Tuple[Tuple[int, ...], Tuple[int, ...]]


def _guard(grid: GridDiagram) -> None:
    if grid.n > MAX_N:
        raise ValueError(f"oracle is limited to grid size {MAX_N}")


# -- gradings -------------------------------------------------------------------

def _I(P, Q) -> int:
    return sum(1 for p in P for q in Q if p[0] < q[0] and p[1] < q[1])


def _J(P: Dict, Q: Dict) -> Fraction:
    """Bilinear extension of (I(P,Q) + I(Q,P)) / 2 to weighted point sets."""
    tot = Fraction(0)
    for p, wp in P.items():
        for q, wq in Q.items():
            tot += wp * wq * (_I([p], [q]) + _I([q], [p]))
    return tot / 2


def _combine(*parts) -> Dict:
    out: Dict = {}
    for coeff, pts in parts:
        for p in pts:
            out[p] = out.get(p, 0) + Fraction(coeff)
    return out


def gradings(grid: GridDiagram, sigma: Sequence[int]) -> Tuple[int, int]:
    x = [(Fraction(i), Fraction(r)) for i, r in enumerate(sigma)]
    o = [(Fraction(2 * i + 1, 2), Fraction(2 * r + 1, 2)) for i, r in enumerate(grid.o_rows)]
    xs = [(Fraction(2 * i + 1, 2), Fraction(2 * r + 1, 2)) for i, r in enumerate(grid.x_rows)]
    d = _combine((1, x), (-1, o))
    m = _J(d, d) + 1
    a = _J(_combine((1, x), (Fraction(-1, 2), xs), (Fraction(-1, 2), o)), _combine((1, xs), (-1, o))) - Fraction(grid.n - 1, 2)
    assert m.denominator == 1 and a.denominator == 1
    return int(m), int(a)


# -- rectangles -------------------------------------------------------------------

def rectangles(grid: GridDiagram, sigma: Sequence[int]) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Empty rectangles out of sigma as (target, O-count vector)."""
    n = grid.n
    out = []
    for a, b in itertools.permutations(range(n), 2):
        w, h = (b - a) % n, (sigma[b] - sigma[a]) % n
        cols = [(a + t) % n for t in range(w)]
        rows = [(sigma[a] + t) % n for t in range(h)]
        inner_cols = set(cols[1:])
        inner_rows = set(rows[1:])
        if any(k in inner_cols and sigma[k] in inner_rows for k in range(n)):
            continue
        counts = tuple(1 if (k in cols and grid.o_rows[k] in rows) else 0 for k in range(n))
        tgt = list(sigma)
        tgt[a], tgt[b] = sigma[b], sigma[a]
        out.append((tuple(tgt), counts))
    return out


class Complex:
    """C^-(G) over F, one degree at a time."""

    def __init__(self, grid: GridDiagram):
        _guard(grid)
        self.grid = grid
        self.states = list(itertools.permutations(range(grid.n)))
        self.grading = {s: gradings(grid, s) for s in self.states}
        self._rect = {s: rectangles(grid, s) for s in self.states}

    def basis(self, k: int) -> List[Gen]:
        out = []
        n = self.grid.n
        for s in self.states:
            m = self.grading[s][0]
            if m >= k and (m - k) % 2 == 0:
                for exps in _exponents((m - k) // 2, n):
                    out.append((s, exps))
        return out

    def point(self, g: Gen) -> Tuple[int, int]:
        s, e = g
        return -e[0], self.grading[s][1] - sum(e)

    def boundary_matrix(self, k: int) -> Tuple[np.ndarray, List[Gen], List[Gen]]:
        """Matrix of C_k -> C_{k-1}."""
        src, dst = self.basis(k), self.basis(k - 1)
        index = {g: r for r, g in enumerate(dst)}
        mat = np.zeros((len(dst), len(src)), dtype=np.uint8)
        for c, (s, e) in enumerate(src):
            for t, counts in self._rect[s]:
                mat[index[(t, tuple(x + y for x, y in zip(e, counts)))], c] ^= 1
        return mat, dst, src


def _exponents(total: int, parts: int):
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for c in cuts + (total + parts - 1,):
            out.append(c - prev - 1)
            prev = c
        yield tuple(out)


# -- dense GF(2) ---------------------------------------------------------------------

def gf2_rank(mat: np.ndarray) -> int:
    a = (np.array(mat, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        hits = np.nonzero(a[r:, c])[0]
        if len(hits) == 0:
            continue
        p = r + hits[0]
        a[[r, p]] = a[[p, r]]
        below = np.nonzero(a[:, c])[0]
        below = below[below != r]
        a[below] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


def gf2_nullspace(mat: np.ndarray) -> List[np.ndarray]:
    a = (np.array(mat, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if len(hits) == 0:
            continue
        p = r + hits[0]
        a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        a[others] ^= a[r]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    out = []
    for f in free:
        v = np.zeros(cols, dtype=np.uint8)
        v[f] = 1
        for row, pc in enumerate(pivots):
            v[pc] = a[row, f]
        out.append(v)
    return out


def in_span(mat: np.ndarray, b: np.ndarray) -> bool:
    if mat.shape[1] == 0:
        return not b.any()
    return gf2_rank(mat) == gf2_rank(np.column_stack([mat, b]))


# -- homology and realizability ---------------------------------------------------------

def dense_homology_rank(grid: GridDiagram, k: int) -> int:
    if k < -4:
        raise ValueError("degree below the supported window")
    cx = Complex(grid)
    d_k, _, src = cx.boundary_matrix(k)
    d_up, _, _ = cx.boundary_matrix(k + 1)
    return len(src) - gf2_rank(d_k) - gf2_rank(d_up)


def generator_cycle(grid: GridDiagram, cx: Optional[Complex] = None) -> Set[Gen]:
    """A degree-0 cycle that is not a boundary (H_0 is one-dimensional)."""
    cx = cx or Complex(grid)
    d0, _, basis0 = cx.boundary_matrix(0)
    d1, _, _ = cx.boundary_matrix(1)
    for v in gf2_nullspace(d0):
        if not in_span(d1, v):
            return {basis0[i] for i in np.nonzero(v)[0]}
    raise AssertionError("no homology in degree 0")


def is_homology_generator(grid: GridDiagram, chain: Set[Gen], cx: Optional[Complex] = None) -> bool:
    cx = cx or Complex(grid)
    d0, _, basis0 = cx.boundary_matrix(0)
    d1, _, _ = cx.boundary_matrix(1)
    index = {g: i for i, g in enumerate(basis0)}
    v = np.zeros(len(basis0), dtype=np.uint8)
    for g in chain:
        v[index[g]] ^= 1
    cycle = not ((d0.astype(np.int64) @ v) % 2).any() if d0.size else True
    return bool(cycle and v.any() and not in_span(d1, v))


def brute_realizable(grid: GridDiagram, z: Set[Gen], region: Region, cx: Optional[Complex] = None) -> bool:
    """Is U_1^s z + (boundary) supported in R[s]?  Checked as membership
    of U_1^s z in the span of all boundaries and all in-region generators."""
    cx = cx or Complex(grid)
    s = max(0, max(i for i, _ in region.corners))
    k = -2 * s
    d, basis, _ = cx.boundary_matrix(k + 1)
    shifted = [(i - s, j - s) for i, j in region.corners]
    inside = [r for r, g in enumerate(basis)
              if any(p[0] <= c[0] and p[1] <= c[1] for c in shifted for p in [cx.point(g)])]
    unit = np.zeros((len(basis), len(inside)), dtype=np.uint8)
    for col, r in enumerate(inside):
        unit[r, col] = 1
    index = {g: r for r, g in enumerate(basis)}
    b = np.zeros(len(basis), dtype=np.uint8)
    for st, e in z:
        b[index[(st, (e[0] + s,) + tuple(e[1:]))]] ^= 1
    return in_span(np.column_stack([d, unit]) if len(basis) else d, b)


def _area_points(g3: int, g4: int) -> List[Tuple[int, int]]:
    pts = []
    for i in range(-g3, g3 + 1):
        for j in range(-g3, g3 + 1):
            if abs(i - j) > g3:
                continue
            if (i * j >= 0 and abs(i + j) <= g4) or (i * j < 0 and abs(i - j) <= g3):
                pts.append((i, j))
    return pts


def brute_g0(grid: GridDiagram, g3: int, g4: Optional[int] = None) -> List[Region]:
    """Minimal realizable regions among all antichains in the corner area."""
    g4 = g3 if g4 is None else g4
    cx = Complex(grid)
    z = generator_cycle(grid, cx)
    pts = _area_points(g3, g4)
    realizable = []
    for size in range(1, len(pts) + 1):
        for combo in itertools.combinations(pts, size):
            if any(p != q and p[0] <= q[0] and p[1] <= q[1] for p in combo for q in combo):
                continue
            region = Region(combo)
            if brute_realizable(grid, z, region, cx):
                realizable.append(region)
    minimal = []
    for r in realizable:
        if not any(o != r and all(any(c[0] <= d[0] and c[1] <= d[1] for d in r.corners) for c in o.corners)
                   for o in realizable):
            minimal.append(r)
    return sorted(set(minimal))


# -- lens spaces --------------------------------------------------------------------

def d_lens(p: int, q: int, i: int) -> Fraction:
    """Same recursion as production, unrolled into a loop."""
    total = Fraction(0)
    sign = 1
    while p > 1:
        total += sign * Fraction((2 * i + 1 - p - q) ** 2 - p * q, 4 * p * q)
        p, q, i = q, p % q, i % q
        sign = -sign
    assert math.gcd(p, q) == 1
    return total
