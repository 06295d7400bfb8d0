"""States, gradings and the rectangle differential of the grid complex.

A state is a permutation ``sigma``: the intersection point on the
vertical circle at ``x = i`` sits at height ``sigma[i]``.  Markers sit
in square centres, so all coordinates are doubled to stay integral.
"""

from __future__ import annotations

import logging
import math
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from . import f2sparse
from .griddata import CapacityError, GridDiagram, InternalError

log = logging.getLogger(__name__)

DEFAULT_MAX_STATES = math.factorial(9)

Exps = Tuple[int, ...]


def _count_below(P, Q) -> int:
    return sum(1 for (px, py) in P for (qx, qy) in Q if px < qx and py < qy)


def _points(sigma: Sequence[int]):
    return [(2 * i, 2 * s) for i, s in enumerate(sigma)]


def _markers(rows: Sequence[int]):
    return [(2 * i + 1, 2 * r + 1) for i, r in enumerate(rows)]


def _J2(P, Q) -> int:
    """Twice the symmetrised count of pairs with P below-left of Q."""
    return _count_below(P, Q) + _count_below(Q, P)


def maslov_direct(grid: GridDiagram, sigma: Sequence[int]) -> int:
    x, o = _points(sigma), _markers(grid.o_rows)
    twice = _J2(x, x) - 2 * _J2(x, o) + _J2(o, o)
    return twice // 2 + 1


def alexander_direct(grid: GridDiagram, sigma: Sequence[int]) -> int:
    x, o, xm = _points(sigma), _markers(grid.o_rows), _markers(grid.x_rows)
    twice = _J2(x, xm) - _J2(x, o) + (_J2(o, o) - _J2(xm, xm)) // 2 - (grid.n - 1)
    if twice % 2:
        raise InternalError("non-integral Alexander grading on a knot diagram")
    return twice // 2


def rect_counts(grid: GridDiagram, sigma: Sequence[int], a: int, b: int) -> Tuple[int, int, int]:
    """(#O, #X, #interior points) of the torus rectangle with lower-left
    corner on column ``a`` and upper-right corner on column ``b``."""
    n = grid.n
    base = sigma[a]
    height = (sigma[b] - base) % n
    width = (b - a) % n
    n_o = n_x = inner = 0
    for t in range(width):
        c = (a + t) % n
        if (grid.o_rows[c] - base) % n < height:
            n_o += 1
        if (grid.x_rows[c] - base) % n < height:
            n_x += 1
        if t and 0 < (sigma[c] - base) % n < height:
            inner += 1
    return n_o, n_x, inner


def heap_swaps(n: int) -> Iterator[Tuple[int, int]]:
    """Transpositions of Heap's algorithm (iterative form)."""
    c = [0] * n
    i = 1
    while i < n:
        if c[i] < i:
            j = 0 if i % 2 == 0 else c[i]
            yield j, i
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1


@dataclass
class RectTerm:
    target: int
    eps: int       # bitmask over columns whose O lies in the rectangle
    x_count: int


class StateTable:
    """All grid states with gradings and a lazily built differential."""

    def __init__(self, grid: GridDiagram, perms: np.ndarray, maslov: np.ndarray, alex: np.ndarray):
        self.grid = grid
        self.n = grid.n
        self.perms = perms
        self.maslov = maslov
        self.alex = alex
        self._weights = np.array([self.n ** k for k in range(self.n)], dtype=np.int64)
        self.codes = perms.astype(np.int64) @ self._weights
        self._order = np.argsort(self.codes, kind="stable")
        self._sorted = self.codes[self._order]
        self._rect = None
        self._by_grading = None

    def __len__(self) -> int:
        return len(self.perms)

    def perm(self, sid: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.perms[sid])

    def id_of(self, sigma: Sequence[int]) -> int:
        code = int(np.dot(np.asarray(sigma, dtype=np.int64), self._weights))
        k = int(np.searchsorted(self._sorted, code))
        if k >= len(self._sorted) or self._sorted[k] != code:
            raise KeyError(tuple(sigma))
        return int(self._order[k])

    def ids_of_codes(self, codes: np.ndarray) -> np.ndarray:
        k = np.searchsorted(self._sorted, codes)
        return self._order[k]

    # -- differential ------------------------------------------------

    def _build_rectangles(self):
        n, P = self.n, self.perms.astype(np.int64)
        N = len(P)
        o_rows = np.array(self.grid.o_rows, dtype=np.int64)
        x_rows = np.array(self.grid.x_rows, dtype=np.int64)
        w = self._weights
        src, tgt, eps, xcnt = [], [], [], []
        for a in range(n):
            base = P[:, a:a + 1]
            rel = (P - base) % n
            rel_o = (o_rows[None, :] - base) % n
            rel_x = (x_rows[None, :] - base) % n
            runmin = np.full(N, n + 1, dtype=np.int64)
            for d in range(1, n):
                b = (a + d) % n
                hb = rel[:, b]
                empty = runmin > hb
                cols = [(a + t) % n for t in range(d)]
                inc_o = rel_o[:, cols] < hb[:, None]
                inc_x = rel_x[:, cols] < hb[:, None]
                bits = np.array([1 << c for c in cols], dtype=np.int64)
                e = inc_o.astype(np.int64) @ bits
                xc = inc_x.sum(axis=1)
                idx = np.flatnonzero(empty)
                if len(idx):
                    pa, pb = P[idx, a], P[idx, b]
                    tcode = self.codes[idx] + (pb - pa) * w[a] + (pa - pb) * w[b]
                    src.append(idx)
                    tgt.append(self.ids_of_codes(tcode))
                    eps.append(e[idx])
                    xcnt.append(xc[idx])
                runmin = np.minimum(runmin, hb)
        src = np.concatenate(src) if src else np.zeros(0, np.int64)
        order = np.argsort(src, kind="stable")
        src = src[order]
        self._rect_tgt = np.concatenate(tgt)[order].astype(np.int64) if tgt else src
        self._rect_eps = np.concatenate(eps)[order] if eps else src
        self._rect_x = np.concatenate(xcnt)[order] if xcnt else src
        self._rect_ptr = np.searchsorted(src, np.arange(N + 1))
        self._rect = {}

    def rectangles(self, sid: int) -> List[Tuple[int, int, int]]:
        """Empty rectangles out of state ``sid``: (target, eps mask, #X)."""
        if self._rect is None:
            self._build_rectangles()
        cached = self._rect.get(sid)
        if cached is None:
            lo, hi = self._rect_ptr[sid], self._rect_ptr[sid + 1]
            cached = list(zip(self._rect_tgt[lo:hi].tolist(),
                              self._rect_eps[lo:hi].tolist(),
                              self._rect_x[lo:hi].tolist()))
            self._rect[sid] = cached
        return cached

    def by_grading(self) -> Dict[Tuple[int, int], np.ndarray]:
        if self._by_grading is None:
            groups = defaultdict(list)
            for sid, (m, a) in enumerate(zip(self.maslov.tolist(), self.alex.tolist())):
                groups[(m, a)].append(sid)
            self._by_grading = {k: np.array(v, dtype=np.int64) for k, v in groups.items()}
        return self._by_grading


def enumerate_states(grid: GridDiagram, max_states: int = DEFAULT_MAX_STATES,
                     check_fraction: float = 0.01, seed: int = 0) -> StateTable:
    """Enumerate all n! states in Heap order, updating gradings one
    transposition at a time, then spot-check against the direct formulas."""
    n = grid.n
    total = math.factorial(n)
    if total > max_states:
        raise CapacityError(f"grid size {n} needs {total} states, capacity is {max_states}")
    sigma = list(range(n))
    m = maslov_direct(grid, sigma)
    a = alexander_direct(grid, sigma)
    perms = np.empty((total, n), dtype=np.int8)
    maslov = np.empty(total, dtype=np.int32)
    alex = np.empty(total, dtype=np.int32)
    perms[0], maslov[0], alex[0] = sigma, m, a
    k = 1
    for j, i in heap_swaps(n):
        lo, hi = (j, i) if sigma[j] < sigma[i] else (i, j)
        n_o, n_x, inner = rect_counts(grid, sigma, lo, hi)
        m += 2 * n_o - 2 * inner - 1
        a += n_o - n_x
        sigma[j], sigma[i] = sigma[i], sigma[j]
        perms[k], maslov[k], alex[k] = sigma, m, a
        k += 1
    table = StateTable(grid, perms, maslov, alex)
    rng = random.Random(seed)
    sample = rng.sample(range(total), min(total, max(10, int(total * check_fraction))))
    for sid in sample:
        s = table.perm(sid)
        if maslov_direct(grid, s) != table.maslov[sid] or alexander_direct(grid, s) != table.alex[sid]:
            raise InternalError(f"incremental grading mismatch at state {s}")
    log.debug("enumerated %d states for n=%d", total, n)
    return table


def rectangle_terms(grid: GridDiagram, sigma: Sequence[int]) -> List[Tuple[Tuple[int, ...], int, int]]:
    """Empty rectangles out of one state, computed directly:
    (target permutation, eps mask, #X)."""
    n = grid.n
    out = []
    for a in range(n):
        for d in range(1, n):
            b = (a + d) % n
            n_o, n_x, inner = rect_counts(grid, sigma, a, b)
            if inner:
                continue
            eps = 0
            base, height = sigma[a], (sigma[b] - sigma[a]) % n
            for t in range(d):
                c = (a + t) % n
                if (grid.o_rows[c] - base) % n < height:
                    eps |= 1 << c
            tgt = list(sigma)
            tgt[a], tgt[b] = tgt[b], tgt[a]
            out.append((tuple(tgt), eps, n_x))
    return out


# -- inflated generators ------------------------------------------------

def compositions(total: int, parts: int) -> Iterator[Exps]:
    """All tuples of ``parts`` non-negative ints summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def add_eps(exps: Exps, eps: int) -> Exps:
    if not eps:
        return exps
    return tuple(e + ((eps >> k) & 1) for k, e in enumerate(exps))


def inflated_count(n: int, maslov: int, k: int) -> int:
    if maslov < k or (maslov - k) % 2:
        return 0
    m = (maslov - k) // 2
    return math.comb(m + n - 1, n - 1)


def inflated_generators(table: StateTable, k: int) -> Iterator[Tuple[int, Exps]]:
    """Generators ``U^a x`` of Maslov degree ``k``.  Each has
    Alg = -a[0] and Alex = A(x) - sum(a)."""
    n = table.n
    for sid in range(len(table)):
        mx = int(table.maslov[sid])
        if mx < k or (mx - k) % 2:
            continue
        for a in compositions((mx - k) // 2, n):
            yield sid, a


def generator_point(table: StateTable, sid: int, exps: Exps) -> Tuple[int, int]:
    return -exps[0], int(table.alex[sid]) - sum(exps)


def boundary_chain(table: StateTable, chain) -> set:
    """Differential of a chain given as a set of (state id, exps)."""
    out = set()
    for sid, exps in chain:
        for tgt, eps, _ in table.rectangles(sid):
            out ^= {(tgt, add_eps(exps, eps))}
    return out


# -- hat knot Floer homology --------------------------------------------

def _blocked_ranks(table: StateTable) -> Dict[Tuple[int, int], int]:
    """Ranks of the fully blocked differential C_(m,a) -> C_(m-1,a)."""
    groups = table.by_grading()
    position = {}
    for key, ids in groups.items():
        for k, sid in enumerate(ids.tolist()):
            position[sid] = k
    ranks = {}
    for (m, a), ids in groups.items():
        below = groups.get((m - 1, a))
        if below is None:
            continue
        entries = []
        for col, sid in enumerate(ids.tolist()):
            for tgt, eps, xc in table.rectangles(sid):
                if eps == 0 and xc == 0:
                    entries.append((position[tgt], col))
        mat = f2sparse.SparseMatrixGF2.from_triplets(entries, len(below), len(ids))
        ranks[(m, a)] = f2sparse.rank(mat)
    return ranks


def _deconvolve(poly: Dict[Tuple[int, int], int], n: int) -> Dict[Tuple[int, int], int]:
    """Divide by (1 + z)^(n-1) where z shifts (m, a) -> (m-1, a-1)."""
    width = n - 1
    binom = [math.comb(width, k) for k in range(width + 1)]
    diagonals = defaultdict(dict)
    for (m, a), c in poly.items():
        if c:
            diagonals[m - a][a] = c
    out = {}
    for diag, series in diagonals.items():
        rest = dict(series)
        for a in range(max(series), min(series) - 1, -1):
            c = rest.get(a, 0)
            if c == 0:
                continue
            if c < 0:
                raise InternalError("negative coefficient while reducing the blocked homology")
            out[(a + diag, a)] = c
            for k in range(width + 1):
                rest[a - k] = rest.get(a - k, 0) - c * binom[k]
        if any(rest.values()):
            raise InternalError("blocked homology is not divisible by the tensor factor")
    return out


def hfk_hat(table: StateTable) -> Dict[Tuple[int, int], int]:
    """Ranks of hat knot Floer homology keyed by (Maslov, Alexander)."""
    groups = table.by_grading()
    ranks = _blocked_ranks(table)
    poly = {}
    for (m, a), ids in groups.items():
        poly[(m, a)] = len(ids) - ranks.get((m, a), 0) - ranks.get((m + 1, a), 0)
    return _deconvolve(poly, table.n)


def s_hat_sets(hfk: Dict[Tuple[int, int], int]) -> Tuple[set, set]:
    """Lattice points of hat generators in the 0 and -1 degree slices."""
    s0, s1 = set(), set()
    for (m, a), r in hfk.items():
        if not r:
            continue
        if m % 2 == 0:
            shift = m // 2
            s0.add((-shift, a - shift))
        else:
            shift = (m + 1) // 2
            s1.add((-shift, a - shift))
    return s0, s1


def mirror_hfk(hfk: Dict[Tuple[int, int], int]) -> Dict[Tuple[int, int], int]:
    return {(-m, -a): r for (m, a), r in hfk.items()}


def genus_from_hfk(hfk: Dict[Tuple[int, int], int]) -> int:
    return max(abs(a) for (m, a), r in hfk.items() if r)
