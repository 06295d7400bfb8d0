"""Realizability of a closed region.

R with shift number s (taken >= 0) is realizable iff U_1^s z is null
homologous in the quotient Q = C / C_{R[s]}, i.e. iff ``A x = b`` is
solvable where A is the differential Q_{-2s+1} -> Q_{-2s} and b is the
image of U_1^s z.  Before the full system a projected one over
F[U_1, U_2] (all U_i with i >= 2 identified) is tried: it can only prove
non-realizability, but is much smaller.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from . import f2sparse
from .f2sparse import SparseMatrixGF2
from .griddata import InternalError
from .gridcomplex import StateTable, compositions
from .regions import Region

log = logging.getLogger(__name__)

Gen = Tuple[int, Tuple[int, ...]]


def region_shift(region: Region) -> int:
    return max(0, region.shift_number)


def in_subcomplex(point: Tuple[int, int], region: Region, s: int) -> bool:
    return region.shift(s).contains(point)


def project_exps(exps: Sequence[int]) -> Tuple[int, int]:
    return exps[0], sum(exps[1:])


def _levels(table: StateTable, region: Region, s: int, k: int):
    """For each state: (m, allowed a1 values) for generators of degree k
    outside R[s]."""
    shifted = region.shift(s)
    cache: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    for sid, (mx, ax) in enumerate(zip(table.maslov.tolist(), table.alex.tolist())):
        if mx < k or (mx - k) % 2:
            continue
        key = (mx, ax)
        a1s = cache.get(key)
        if a1s is None:
            m = (mx - k) // 2
            a1s = cache[key] = tuple(a1 for a1 in range(m + 1) if not shifted.contains((-a1, ax - m)))
        if a1s:
            yield sid, (mx - k) // 2, a1s


def quotient_basis(table: StateTable, region: Region, s: int, k: int, projected: bool = False) -> List[Gen]:
    """Degree-k generators U^a x not in C_{R[s]}, in a fixed order (state,
    then exponents)."""
    n = table.n
    out: List[Gen] = []
    for sid, m, a1s in _levels(table, region, s, k):
        for a1 in a1s:
            if projected:
                out.append((sid, (a1, m - a1)))
            else:
                for rest in compositions(m - a1, n - 1):
                    out.append((sid, (a1,) + rest))
    return out


def quotient_size(table: StateTable, region: Region, s: int, k: int, projected: bool = False) -> int:
    n = table.n
    total = 0
    for _, m, a1s in _levels(table, region, s, k):
        if projected:
            total += len(a1s)
        else:
            total += sum(math.comb(m - a1 + n - 2, n - 2) for a1 in a1s)
    return total


def system_cost(table: StateTable, region: Region) -> int:
    s = region_shift(region)
    return quotient_size(table, region, s, -2 * s) * quotient_size(table, region, s, -2 * s + 1)


def z_on_table(table: StateTable, z: Iterable[Tuple[Tuple[int, ...], Tuple[int, ...]]]) -> Set[Gen]:
    return {(table.id_of(perm), tuple(exps)) for perm, exps in z}


def project_chain(chain: Iterable[Gen]) -> Set[Gen]:
    out: Set[Gen] = set()
    for sid, exps in chain:
        out ^= {(sid, project_exps(exps))}
    return out


@dataclass
class System:
    A: SparseMatrixGF2
    b: int
    rows: List[Gen]
    cols: List[Gen]
    shift: int
    projected: bool


def rhs_terms(table: StateTable, z: Set[Gen], region: Region, s: int, projected: bool = False) -> Set[Gen]:
    """Terms of U_1^s z lying outside C_{R[s]}."""
    chain = project_chain(z) if projected else z
    shifted = region.shift(s)
    out = set()
    for sid, exps in chain:
        e = (exps[0] + s,) + tuple(exps[1:])
        if not shifted.contains((-e[0], int(table.alex[sid]) - sum(e))):
            out.add((sid, e))
    return out


def realizability_system(table: StateTable, z: Set[Gen], region: Region, projected: bool = False) -> System:
    s = region_shift(region)
    rows = quotient_basis(table, region, s, -2 * s, projected)
    cols = quotient_basis(table, region, s, -2 * s + 1, projected)
    row_index = {g: r for r, g in enumerate(rows)}
    row_cols: List[List[int]] = [[] for _ in rows]
    for c, (sid, exps) in enumerate(cols):
        for tgt, eps, _ in table.rectangles(sid):
            if projected:
                key = (tgt, (exps[0] + (eps & 1), exps[1] + (eps >> 1).bit_count()))
            else:
                key = (tgt, tuple(e + ((eps >> k) & 1) for k, e in enumerate(exps)))
            r = row_index.get(key)
            if r is not None:
                row_cols[r].append(c)
    A = SparseMatrixGF2.from_row_lists(row_cols, len(cols))
    b = 0
    for term in rhs_terms(table, z, region, s, projected):
        r = row_index.get(term)
        if r is None:
            raise InternalError("right-hand side term outside the quotient basis")
        b |= 1 << r
    return System(A, b, rows, cols, s, projected)


@dataclass
class Verdict:
    region: Region
    shift: int
    rows: int
    cols: int
    realizable: bool
    via: str
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"region": self.region.to_list(), "shift": self.shift, "rows": self.rows,
                "cols": self.cols, "realizable": self.realizable, "via": self.via}


def is_realizable(table: StateTable, z: Set[Gen], region: Region, use_pi: Optional[bool] = None,
                  chunk: int = 2048) -> Verdict:
    """Zero right-hand side, then the projected system, then the full one."""
    s = region_shift(region)
    if not rhs_terms(table, z, region, s):
        return Verdict(region, s, 0, 0, True, "zero-b")
    if use_pi is None:
        use_pi = table.n >= 4
    if use_pi and table.n >= 3:
        small = realizability_system(table, z, region, projected=True)
        res = f2sparse.incremental_solve(small.A, small.b, chunk)
        if not res.consistent:
            return Verdict(region, s, small.A.n_rows, small.A.n_cols, False, "pi-reject",
                           {"exit": res.exit})
    full = realizability_system(table, z, region)
    res = f2sparse.incremental_solve(full.A, full.b, chunk)
    log.debug("region %s: %dx%d %s", region, full.A.n_rows, full.A.n_cols, res.exit)
    return Verdict(region, s, full.A.n_rows, full.A.n_cols, res.consistent, "full",
                   {"exit": res.exit, "rows_used": res.rows_used})
