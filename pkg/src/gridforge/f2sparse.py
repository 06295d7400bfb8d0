"""Linear algebra over GF(2).

Rows are stored as Python ints used as bitsets (bit ``c`` set means a
one in column ``c``).  Elimination is done with structural pivots first
(distinct leftmost entries, which are already triangular), then the
remaining rows are reduced against them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

log = logging.getLogger(__name__)


def _lowbit(v: int) -> int:
    return (v & -v).bit_length() - 1


def _bits(v: int) -> List[int]:
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


@dataclass
class SparseMatrixGF2:
    n_rows: int
    n_cols: int
    rows: List[int]

    def __post_init__(self):
        if len(self.rows) != self.n_rows:
            raise ValueError("row count mismatch")
        limit = 1 << self.n_cols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has entries outside the column range")

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "SparseMatrixGF2":
        return cls(n_rows, n_cols, [0] * n_rows)

    @classmethod
    def from_row_lists(cls, row_lists: Sequence[Iterable[int]], n_cols: int) -> "SparseMatrixGF2":
        rows = []
        for cols in row_lists:
            v = 0
            for c in cols:
                v ^= 1 << c
            rows.append(v)
        return cls(len(rows), n_cols, rows)

    @classmethod
    def from_triplets(cls, entries: Iterable[Tuple[int, int]], n_rows: int, n_cols: int) -> "SparseMatrixGF2":
        """Build from (row, col) pairs; repeated pairs cancel mod 2."""
        rows = [0] * n_rows
        for r, c in entries:
            rows[r] ^= 1 << c
        return cls(n_rows, n_cols, rows)

    @classmethod
    def from_dense(cls, dense) -> "SparseMatrixGF2":
        dense = np.asarray(dense, dtype=np.uint8) & 1
        n_rows, n_cols = dense.shape
        rows = []
        for r in range(n_rows):
            v = 0
            for c in np.flatnonzero(dense[r]):
                v |= 1 << int(c)
            rows.append(v)
        return cls(n_rows, n_cols, rows)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for r, v in enumerate(self.rows):
            for c in _bits(v):
                out[r, c] = 1
        return out

    def row_lists(self) -> List[List[int]]:
        return [_bits(v) for v in self.rows]

    @property
    def nnz(self) -> int:
        return sum(v.bit_count() for v in self.rows)

    def matvec(self, x: int) -> int:
        """A @ x where x is a bitset over columns; result is a bitset over rows."""
        out = 0
        for r, v in enumerate(self.rows):
            if (v & x).bit_count() & 1:
                out |= 1 << r
        return out

    def transpose(self) -> "SparseMatrixGF2":
        cols = [0] * self.n_cols
        for r, v in enumerate(self.rows):
            for c in _bits(v):
                cols[c] |= 1 << r
        return SparseMatrixGF2(self.n_cols, self.n_rows, cols)

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseMatrixGF2":
        """Row ``k`` of the result is row ``row_perm[k]``; column ``k`` is
        old column ``col_perm[k]``."""
        new_pos = {old: k for k, old in enumerate(col_perm)}
        rows = []
        for old_r in row_perm:
            v = 0
            for c in _bits(self.rows[old_r]):
                v |= 1 << new_pos[c]
            rows.append(v)
        return SparseMatrixGF2(len(row_perm), len(col_perm), rows)

    def dump_triplets(self, path) -> None:
        """Write ``n_rows n_cols nnz`` then one ``row col`` line per entry."""
        with open(path, "w") as fh:
            fh.write(f"{self.n_rows} {self.n_cols} {self.nnz}\n")
            for r, v in enumerate(self.rows):
                for c in _bits(v):
                    fh.write(f"{r} {c}\n")

    @classmethod
    def load_triplets(cls, path) -> "SparseMatrixGF2":
        with open(path) as fh:
            n_rows, n_cols, _ = (int(t) for t in fh.readline().split())
            entries = [tuple(int(t) for t in line.split()) for line in fh if line.strip()]
        return cls.from_triplets(entries, n_rows, n_cols)


def structural_pivots(A: SparseMatrixGF2) -> Dict[int, int]:
    """Greedy pivot choice: each column is claimed by at most one row whose
    leftmost entry lies in it; lighter rows win ties.  Returns row -> col,
    and the chosen rows are triangular in column order."""
    best: Dict[int, Tuple[int, int]] = {}
    for r, v in enumerate(A.rows):
        if not v:
            continue
        c = _lowbit(v)
        cand = (v.bit_count(), r)
        if c not in best or cand < best[c]:
            best[c] = cand
    return {r: c for c, (_, r) in sorted(best.items())}


@dataclass
class PartialLU:
    """``A[P][:, Q] == L @ U + pad(schur)`` over GF(2).

    P lists pivot rows first (in pivot column order) and Q lists pivot
    columns first.  L is unit lower trapezoidal (n_rows x r) and U is upper
    trapezoidal with a unit diagonal (r x n_cols)."""

    P: List[int]
    Q: List[int]
    L: SparseMatrixGF2
    U: SparseMatrixGF2
    schur: SparseMatrixGF2

    @property
    def rank_pivots(self) -> int:
        return self.U.n_rows

    def reconstruct(self) -> np.ndarray:
        r = self.rank_pivots
        prod = (self.L.to_dense().astype(np.int64) @ self.U.to_dense().astype(np.int64)) % 2
        prod[r:, r:] ^= self.schur.to_dense()
        return prod.astype(np.uint8)


def partial_lu(A: SparseMatrixGF2) -> PartialLU:
    piv = structural_pivots(A)
    piv_cols = sorted(piv.values())
    col_row = {c: r for r, c in piv.items()}
    piv_mask = 0
    for c in piv_cols:
        piv_mask |= 1 << c
    P = [col_row[c] for c in piv_cols] + [r for r in range(A.n_rows) if r not in piv]
    Q = piv_cols + [c for c in range(A.n_cols) if not (piv_mask >> c) & 1]
    col_pos = {c: k for k, c in enumerate(piv_cols)}

    r = len(piv_cols)
    l_rows, s_rows = [], []
    for k, row_idx in enumerate(P):
        if k < r:
            l_rows.append(1 << k)
            continue
        v = A.rows[row_idx]
        used = 0
        while v & piv_mask:
            c = _lowbit(v & piv_mask)
            v ^= A.rows[col_row[c]]
            used |= 1 << col_pos[c]
        l_rows.append(used)
        s_rows.append(v)

    u = A.permuted([col_row[c] for c in piv_cols], Q)
    rest = Q[r:]
    schur = SparseMatrixGF2.from_row_lists(
        [[k for k, c in enumerate(rest) if (v >> c) & 1] for v in s_rows], len(rest)
    ) if s_rows else SparseMatrixGF2.zeros(0, len(rest))
    return PartialLU(P, Q, SparseMatrixGF2(A.n_rows, r, l_rows), u, schur)


def _echelon_insert(basis: Dict[int, int], v: int) -> int:
    while v:
        low = _lowbit(v)
        other = basis.get(low)
        if other is None:
            basis[low] = v
            return v
        v ^= other
    return 0


def dense_rref(A: SparseMatrixGF2) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form.  Returns (rows, pivot columns)."""
    rows = list(A.rows)
    pivots: List[int] = []
    out: List[int] = []
    for c in range(A.n_cols):
        bit = 1 << c
        sel = next((k for k, v in enumerate(rows) if v & bit), None)
        if sel is None:
            continue
        pv = rows.pop(sel)
        rows = [v ^ pv if v & bit else v for v in rows]
        out = [v ^ pv if v & bit else v for v in out]
        out.append(pv)
        pivots.append(c)
    return out, pivots


def rank(A: SparseMatrixGF2) -> int:
    if A.n_rows == 0 or A.n_cols == 0:
        return 0
    lu = partial_lu(A)
    basis: Dict[int, int] = {}
    for v in lu.schur.rows:
        _echelon_insert(basis, v)
    return lu.rank_pivots + len(basis)


@dataclass
class SolveResult:
    consistent: bool
    x: Optional[int] = None
    rows_used: int = 0
    pivots: int = 0
    exit: str = ""
    stats: dict = field(default_factory=dict)


def _back_substitute(basis: Dict[int, int], n_cols: int) -> int:
    x = 0
    col_mask = (1 << n_cols) - 1
    for p in sorted(basis, reverse=True):
        v = basis[p]
        val = (v >> n_cols) & 1
        val ^= ((v & col_mask & ~(1 << p)) & x).bit_count() & 1
        if val:
            x |= 1 << p
    return x


def incremental_solve(A: SparseMatrixGF2, b: int, chunk: int = 2048) -> SolveResult:
    """Decide whether ``A x = b`` has a solution.

    Structural pivot rows go in first, then the other rows in chunks.  After
    each chunk a candidate solution is tried against every row, so a
    solvable system usually stops long before all rows are reduced, while a
    contradiction ``0 = 1`` stops an unsolvable one as soon as it appears.
    """
    if chunk < 1:
        raise ValueError("chunk must be positive")
    n = A.n_cols
    top = 1 << n
    aug = [v | (top if (b >> r) & 1 else 0) for r, v in enumerate(A.rows)]
    if b == 0:
        return SolveResult(True, 0, 0, 0, "zero-rhs")
    piv = structural_pivots(A)
    basis: Dict[int, int] = {}
    for r, c in piv.items():
        basis[c] = aug[r]
    order = [r for r in range(A.n_rows) if r not in piv]

    def verified(x: int) -> bool:
        return A.matvec(x) == b

    used = len(piv)
    x = _back_substitute(basis, n)
    if verified(x):
        return SolveResult(True, x, used, len(piv), "pivots")
    for start in range(0, len(order), chunk):
        for r in order[start:start + chunk]:
            used += 1
            if _echelon_insert(basis, aug[r]) == top:
                return SolveResult(False, None, used, len(piv), "contradiction",
                                   {"row": r})
        x = _back_substitute(basis, n)
        if verified(x):
            return SolveResult(True, x, used, len(piv), "chunk")
    raise AssertionError("eliminated system is consistent but back substitution failed")


def solve_dense(A: SparseMatrixGF2, b: int) -> Optional[int]:
    """Plain full elimination; used as the reference path."""
    n = A.n_cols
    top = 1 << n
    basis: Dict[int, int] = {}
    for r, v in enumerate(A.rows):
        if _echelon_insert(basis, v | (top if (b >> r) & 1 else 0)) == top:
            return None
    return _back_substitute(basis, n)
