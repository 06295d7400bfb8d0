"""Closed regions of Z^2 (lower sets) described by their corners.

A region is stored as the antichain of its maximal points, sorted by
first coordinate (so the second one decreases).  Coordinates may be
``INF`` for unbounded regions such as ``{i <= -1}``; those are only used
for the tau test and never enter the duality or candidate machinery.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

INF = math.inf

Point = Tuple[int, int]


def _maxima(points: Iterable[Tuple]) -> Tuple[Tuple, ...]:
    pts = sorted(set(points), key=lambda p: (p[0], p[1]))
    out: List[Tuple] = []
    best_j = -INF
    # sweep right to left keeping points whose j beats everything to the right
    for p in reversed(pts):
        if p[1] > best_j:
            out.append(p)
            best_j = p[1]
    return tuple(reversed(out))


@dataclass(frozen=True, order=True)
class Region:
    corners: Tuple[Tuple, ...]

    def __post_init__(self):
        if not self.corners:
            raise ValueError("a region needs at least one corner")
        object.__setattr__(self, "corners", _maxima(self.corners))

    # -- constructors --------------------------------------------------

    @classmethod
    def simple(cls, i, j) -> "Region":
        return cls(((i, j),))

    @classmethod
    def staircase(cls, g: int) -> "Region":
        """The region {i + j <= -g}."""
        return cls(tuple((-g + k, -k) for k in range(g + 1)))

    @classmethod
    def tau_region(cls, m: int) -> "Region":
        """{i <= -1} together with R_(0, m)."""
        return cls(((-1, INF), (0, m)))

    # -- predicates ----------------------------------------------------

    @property
    def is_semisimple(self) -> bool:
        return all(math.isfinite(c) for p in self.corners for c in p)

    @property
    def is_simple(self) -> bool:
        return len(self.corners) == 1 and self.is_semisimple

    def contains(self, p: Sequence) -> bool:
        return any(p[0] <= c[0] and p[1] <= c[1] for c in self.corners)

    def subset(self, other: "Region") -> bool:
        return all(other.contains(c) for c in self.corners)

    def meets_negative(self, other: "Region") -> bool:
        """Whether self meets -other = {-p : p in other}."""
        return any(a[0] + b[0] >= 0 and a[1] + b[1] >= 0
                   for a in self.corners for b in other.corners)

    # -- transformations -----------------------------------------------

    def shift(self, s: int) -> "Region":
        """R[s] = {p : p + (s, s) in R}."""
        return Region(tuple((i - s, j - s) for i, j in self.corners))

    def reflect(self) -> "Region":
        return Region(tuple((j, i) for i, j in self.corners))

    def without_corner(self, corner: Point) -> Optional["Region"]:
        """The largest closed region inside self missing ``corner``."""
        if corner not in self.corners:
            raise ValueError("not a corner")
        i, j = corner
        pts = [c for c in self.corners if c != corner] + [(i - 1, j), (i, j - 1)]
        return Region(tuple(pts))

    @property
    def shift_number(self) -> int:
        s = max(c[0] for c in self.corners)
        if not math.isfinite(s):
            raise ValueError("region has no finite shift number")
        return int(s)

    # -- serialization -------------------------------------------------

    def to_list(self) -> list:
        return [[_enc(c) for c in p] for p in self.corners]

    @classmethod
    def from_list(cls, data) -> "Region":
        try:
            pts = tuple((_dec(p[0]), _dec(p[1])) for p in data)
        except (TypeError, IndexError, ValueError) as exc:
            raise ValueError(f"bad region {data!r}") from exc
        if any(len(p) != 2 for p in data):
            raise ValueError(f"bad region {data!r}")
        return cls(pts)

    def __str__(self) -> str:
        return " u ".join(f"R({_fmt(i)}, {_fmt(j)})" for i, j in self.corners)


def _enc(v):
    return "inf" if v == INF else int(v)


def _dec(v):
    if v == "inf":
        return INF
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"bad coordinate {v!r}")
    return v


def _fmt(v) -> str:
    return "inf" if v == INF else str(v)


def closure(points: Iterable[Point]) -> Region:
    pts = tuple(points)
    if not pts:
        raise ValueError("closure of an empty set")
    return Region(pts)


def minimize(regions: Iterable[Region]) -> List[Region]:
    """Inclusion-minimal elements, in canonical order."""
    uniq = sorted(set(regions))
    return [r for r in uniq if not any(o != r and o.subset(r) for o in uniq)]


def dual_min(regions: Sequence[Region]) -> List[Region]:
    """min { cl{-p_1, ..., -p_N} : p_k a corner of R_k }.

    Applied to G_0(K) this gives G_0 of the mirror."""
    regions = list(regions)
    if not regions:
        raise ValueError("dual of an empty family")
    if not all(r.is_semisimple for r in regions):
        raise ValueError("duality needs semi-simple regions")
    found: Set[Region] = set()
    for choice in itertools.product(*(r.corners for r in regions)):
        found.add(closure((-i, -j) for i, j in choice))
    return minimize(found)


# -- candidate regions ----------------------------------------------------

def in_corner_area(p: Point, g3: int, g4: int) -> bool:
    i, j = p
    if i * j >= 0:
        return abs(i + j) <= g4
    return abs(i - j) <= g3


def antichains(points: Iterable[Point]) -> List[Tuple[Point, ...]]:
    """All nonempty antichains, each sorted by first coordinate."""
    pts = sorted(set(points))
    out: List[Tuple[Point, ...]] = []

    def grow(chain: Tuple[Point, ...], start: int):
        for k in range(start, len(pts)):
            p = pts[k]
            if chain and not (p[0] > chain[-1][0] and p[1] < chain[-1][1]):
                continue
            nxt = chain + (p,)
            out.append(nxt)
            grow(nxt, k + 1)

    grow((), 0)
    return out


def candidate_ok(region: Region, s0: Set[Point], s1: Set[Point], g3: int, g4: int) -> bool:
    """The necessary conditions every element of G_0 satisfies."""
    cs = region.corners
    if not all(c in s0 and abs(c[0] - c[1]) <= g3 and in_corner_area(c, g3, g4) for c in cs):
        return False
    if not Region.staircase(g4).subset(region):
        return False
    for i in range(g4 + 1):
        if region.contains((i, g4 - i)) and region != Region.simple(i, g4 - i):
            return False
    for (i, j), (k, l) in zip(cs, cs[1:]):
        if not any(a <= i and b <= l for a, b in s1):
            return False
    return True


@dataclass
class Candidates:
    regions: List[Region]
    # representative to test for each region: the member of its
    # reflection pair with the smaller shift number
    representative: Dict[Region, Region]


def candidate_regions(s0: Set[Point], s1: Set[Point], g3: int, g4: Optional[int] = None) -> Candidates:
    """Semi-simple regions passing :func:`candidate_ok`.

    ``g4`` is an upper bound for the 4-genus; without one the 3-genus is
    used.  Every condition only gets weaker as the bound grows, so an
    upper bound never discards a true element."""
    if g4 is None:
        g4 = g3
    if g4 < 0 or g4 > g3:
        raise ValueError(f"inconsistent genus bounds g3={g3}, g4={g4}")
    pts = [p for p in s0 if abs(p[0] - p[1]) <= g3 and in_corner_area(p, g3, g4)]
    found = []
    for chain in antichains(pts):
        r = Region(chain)
        if candidate_ok(r, s0, s1, g3, g4):
            found.append(r)
    found.sort()
    rep = {}
    for r in found:
        rr = r.reflect()
        rep[r] = rr if rr.shift_number < r.shift_number else r
    return Candidates(found, rep)
