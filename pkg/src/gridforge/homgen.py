"""A degree-0 cycle generating H_0 of the grid complex.

On a diagram whose O's lie on the torus anti-diagonal the state
``x0 = {(i, n-1-i)}`` is such a cycle.  Any diagram is reached from that
position by adjacent column swaps, and each swap has a chain map
counting empty pentagons, so pushing ``x0`` back along the swaps gives
a cycle for the original diagram.

Chains are sets of ``(permutation, exponents)`` pairs; they do not
depend on a state table, which lets them move between diagrams.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Set, Tuple

from .griddata import GridDiagram, GridError, InternalError, antidiagonal_path, on_antidiagonal
from .gridcomplex import add_eps, maslov_direct, rectangle_terms

Perm = Tuple[int, ...]
Term = Tuple[Perm, Tuple[int, ...]]


def chain_boundary(grid: GridDiagram, chain: Iterable[Term]) -> Set[Term]:
    out: Set[Term] = set()
    for sigma, exps in chain:
        for tgt, eps, _ in rectangle_terms(grid, sigma):
            out ^= {(tgt, add_eps(exps, eps))}
    return out


def chain_degree(grid: GridDiagram, chain: Iterable[Term]) -> Optional[int]:
    degrees = {maslov_direct(grid, s) - 2 * sum(a) for s, a in chain}
    if len(degrees) > 1:
        raise InternalError("chain is not homogeneous")
    return degrees.pop() if degrees else None


def antidiagonal_generator(grid: GridDiagram) -> Set[Term]:
    if not on_antidiagonal(grid):
        raise GridError("O markers are not on the anti-diagonal")
    n = grid.n
    x0 = tuple(n - 1 - i for i in range(n))
    chain = {(x0, (0,) * n)}
    if maslov_direct(grid, x0) != 0 or chain_boundary(grid, chain):
        raise InternalError("anti-diagonal state is not a degree-0 cycle")
    return chain


# -- the swap picture ---------------------------------------------------
#
# Heights are measured in quarter units: the horizontal circle at row r
# sits at 4r, a marker in row r at 4r + 2.  The old vertical circle beta
# sits at x = i + 1 and the new one, gamma, crosses it twice.  Going up,
# gamma passes from the left of beta to its right at ``up`` and back at
# ``down``.  The O of column i has to end up right of gamma, so it sits
# in the bigon where gamma runs left of beta, and the O of column i+1 in
# the other bigon.  Both crossings are put a quarter row above the
# horizontal circle just below the respective marker.

def _in_arc(h: int, lo: int, hi: int, period: int) -> bool:
    """h lies on the open arc going up from lo to hi."""
    return 0 < (h - lo) % period < (hi - lo) % period


def crossing_heights(before: GridDiagram, i: int) -> Tuple[int, int]:
    return 4 * before.o_rows[i + 1] + 1, 4 * before.o_rows[i] + 1


def pentagons(before: GridDiagram, i: int, sigma: Perm) -> List[Tuple[Perm, int]]:
    """Empty pentagons out of ``sigma`` for the swap of columns i, i+1:
    (target permutation, eps mask in the swapped diagram's columns).

    One side of a pentagon runs along beta and gamma, turning at ``up``;
    it may pass straight through the other crossing."""
    n = before.n
    c = i + 1
    up, _ = crossing_heights(before, i)
    period = 4 * n
    hc = sigma[c]
    out = []
    for j in range(n):
        if j == c:
            continue
        hj = sigma[j]
        if _in_arc(up, 4 * hc, 4 * hj, period):
            # x on beta is the bottom-left corner, region to the right
            lo, width = hc, (hj - hc) % n
            inner = cols = range(c + 1, c + (j - c) % n)
        else:
            # x on beta is the top-right corner, region to the left
            lo, width = hj, (hc - hj) % n
            inner = range(j + 1, j + (c - j) % n)
            cols = range(j, j + (c - j) % n)
        if any(0 < (sigma[k % n] - lo) % n < width for k in inner):
            continue
        eps = 0
        for k in cols:
            k %= n
            if k != i and (before.o_rows[k] - lo) % n < width:
                eps |= 1 << k
        # old column i's O lies inside iff it is above the turn; the other
        # moved O can only be inside below the turn, which its placement
        # rules out
        p_rel = (before.o_rows[i] - lo) % n
        if p_rel < width and 4 * p_rel + 2 > (up - 4 * lo) % period:
            eps |= 1 << c
        tgt = list(sigma)
        tgt[c], tgt[j] = tgt[j], tgt[c]
        out.append((tuple(tgt), eps))
    return out


def special_exponent_rule(before: GridDiagram, i: int, sigma: Perm, target: Perm) -> Tuple[int, int]:
    """Independent statement of the exponents of the two moved O's in a
    pentagon from sigma to target: the O now in column i never counts;
    the O now in column i+1 counts iff, measured upward from the lower
    side of the pentagon, it lies inside and above the other one."""
    n = before.n
    c = i + 1
    j = next(k for k in range(n) if k != c and sigma[k] != target[k])
    up, _ = crossing_heights(before, i)
    if _in_arc(up, 4 * sigma[c], 4 * sigma[j], 4 * n):
        lo, width = sigma[c], (sigma[j] - sigma[c]) % n
    else:
        lo, width = sigma[j], (sigma[c] - sigma[j]) % n
    p_rel = (before.o_rows[i] - lo) % n
    q_rel = (before.o_rows[c] - lo) % n
    return 0, int(p_rel < width and p_rel > q_rel)


def _swap_exps(exps: Tuple[int, ...], i: int) -> Tuple[int, ...]:
    a = list(exps)
    a[i], a[i + 1] = a[i + 1], a[i]
    return tuple(a)


def pentagon_map(before: GridDiagram, after: GridDiagram, i: int, chain: Iterable[Term]) -> Set[Term]:
    if i < 0 or i + 1 >= before.n or before.swap_columns(i) != after:
        raise GridError("diagrams are not related by swapping columns i and i+1")
    out: Set[Term] = set()
    cache: Dict[Perm, List[Tuple[Perm, int]]] = {}
    for sigma, exps in chain:
        terms = cache.get(sigma)
        if terms is None:
            terms = cache[sigma] = pentagons(before, i, sigma)
            for tgt, eps in terms:
                rule = special_exponent_rule(before, i, sigma, tgt)
                if ((eps >> i) & 1, (eps >> (i + 1)) & 1) != rule:
                    raise InternalError("pentagon exponent disagrees with the moved-marker rule")
        moved = _swap_exps(exps, i)
        for tgt, eps in terms:
            out ^= {(tgt, add_eps(moved, eps))}
    return out


def homological_generator(grid: GridDiagram) -> Set[Term]:
    _, moves = antidiagonal_path(grid)
    path = [grid]
    for i in moves:
        path.append(path[-1].swap_columns(i))
    chain = antidiagonal_generator(path[-1])
    for k in range(len(moves) - 1, -1, -1):
        # path[k+1] is path[k] with columns swapped, and the swap is its
        # own inverse, so map from path[k+1] back to path[k]
        chain = pentagon_map(path[k + 1], path[k], moves[k], chain)
    if not chain:
        raise InternalError("homological generator vanished")
    return chain
