import random

import numpy as np
import pytest

from gridforge.f2sparse import (SparseMatrixGF2, dense_rref, incremental_solve, partial_lu, rank, solve_dense,
                                structural_pivots)
from gridforge.oracle import gf2_rank, in_span

SIZES = {"tiny": (1, 8), "small": (8, 40), "medium": (40, 120)}


def random_matrix(rng, lo, hi, density=None):
    r, c = rng.randint(lo, hi), rng.randint(lo, hi)
    p = density if density is not None else rng.choice([0.05, 0.15, 0.4])
    dense = (np.array([[rng.random() < p for _ in range(c)] for _ in range(r)])).astype(np.uint8)
    return SparseMatrixGF2.from_dense(dense), dense


def random_rhs(rng, A, consistent):
    if consistent:
        x = rng.getrandbits(A.n_cols) if A.n_cols else 0
        return A.matvec(x)
    return rng.getrandbits(A.n_rows) if A.n_rows else 0


def test_dense_round_trip():
    d = np.array([[1, 0, 1], [0, 0, 0], [1, 1, 0]], dtype=np.uint8)
    A = SparseMatrixGF2.from_dense(d)
    assert (A.to_dense() == d).all()
    assert A.nnz == 4
    assert (A.transpose().to_dense() == d.T).all()


def test_triplet_file(tmp_path):
    rng = random.Random(0)
    A, _ = random_matrix(rng, 5, 20)
    A.dump_triplets(tmp_path / "m.txt")
    assert SparseMatrixGF2.load_triplets(tmp_path / "m.txt").rows == A.rows


def test_structural_pivots_are_independent_singletons():
    rng = random.Random(1)
    for _ in range(50):
        A, _ = random_matrix(rng, 5, 40)
        piv = structural_pivots(A)
        cols = list(piv.values())
        assert len(set(cols)) == len(cols)
        sub = A.to_dense()[list(piv.keys())][:, cols]
        assert gf2_rank(sub) == len(cols)


@pytest.mark.parametrize("size", list(SIZES))
def test_partial_lu_reconstructs(size):
    rng = random.Random(size)
    for _ in range(100):
        A, d = random_matrix(rng, *SIZES[size])
        lu = partial_lu(A)
        assert (lu.reconstruct() == d[lu.P][:, lu.Q]).all()


@pytest.mark.parametrize("size", list(SIZES))
def test_rank_matches_dense(size):
    rng = random.Random("rank" + size)
    for _ in range(100):
        A, d = random_matrix(rng, *SIZES[size])
        assert rank(A) == gf2_rank(d)
        assert len(dense_rref(A)[1]) == gf2_rank(d)


@pytest.mark.parametrize("size", list(SIZES))
def test_incremental_solve_matches_dense(size):
    rng = random.Random("solve" + size)
    for k in range(100):
        A, d = random_matrix(rng, *SIZES[size])
        b = random_rhs(rng, A, consistent=k % 2 == 0)
        bv = np.array([(b >> r) & 1 for r in range(A.n_rows)], dtype=np.uint8)
        want = in_span(d, bv)
        res = incremental_solve(A, b)
        assert res.consistent == want == (solve_dense(A, b) is not None)
        if res.consistent:
            assert A.matvec(res.x) == b


def test_chunk_size_does_not_change_verdicts():
    rng = random.Random(7)
    for k in range(60):
        A, _ = random_matrix(rng, 10, 90)
        b = random_rhs(rng, A, consistent=k % 3 == 0)
        verdicts = {incremental_solve(A, b, chunk).consistent for chunk in (1, 8, 64, max(1, A.n_rows))}
        assert len(verdicts) == 1


def test_zero_rhs_exit():
    A = SparseMatrixGF2.zeros(3, 3)
    res = incremental_solve(A, 0)
    assert res.consistent and res.exit == "zero-rhs"


def test_contradiction_exit():
    A = SparseMatrixGF2.from_dense(np.array([[1, 1], [1, 1]], dtype=np.uint8))
    res = incremental_solve(A, 0b01)
    assert not res.consistent and res.exit == "contradiction"


def test_bad_chunk():
    with pytest.raises(ValueError):
        incremental_solve(SparseMatrixGF2.zeros(1, 1), 1, chunk=0)
