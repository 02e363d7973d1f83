import numpy as np
import pytest

from greencorr.errors import InputError
from greencorr.linalg import (
    SpanBuilder,
    in_row_space,
    inv_mod,
    mat_inv,
    mat_pow,
    nullspace,
    rank,
    row_space,
    rref,
    solve,
)


def random_matrix(rng, m, n, p):
    return rng.integers(0, p, size=(m, n)).astype(np.int64)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rref_properties(p):
    rng = np.random.default_rng(p)
    for _ in range(20):
        m, n = int(rng.integers(1, 8)), int(rng.integers(1, 8))
        A = random_matrix(rng, m, n, p)
        R, pivots = rref(A, p)
        assert R.shape[0] == len(pivots)
        for i, c in enumerate(pivots):
            assert R[i, c] == 1
            col = R[:, c].copy()
            col[i] = 0
            assert not col.any()  # pivot columns are cleared
        # row space is preserved
        for row in A:
            assert in_row_space(row, R, pivots, p)


@pytest.mark.parametrize("p", [2, 3])
def test_nullspace_exactness(p):
    rng = np.random.default_rng(10 + p)
    for _ in range(20):
        m, n = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        A = random_matrix(rng, m, n, p)
        ns = nullspace(A, p)
        assert len(ns) == n - rank(A, p)
        for v in ns:
            assert not ((A @ v) % p).any()
        if len(ns):
            assert rank(np.stack(ns) if ns.ndim == 1 else ns, p) == len(ns)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_mat_inv_and_solve(p):
    rng = np.random.default_rng(20 + p)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        A = random_matrix(rng, n, n, p)
        if rank(A, p) < n:
            with pytest.raises(InputError):
                mat_inv(A, p)
            continue
        Ai = mat_inv(A, p)
        assert ((A @ Ai) % p == np.eye(n, dtype=np.int64)).all()
        b = random_matrix(rng, n, 1, p)[:, 0]
        x = solve(A, b, p)
        assert x is not None
        assert ((A @ x) % p == b % p).all()


def test_solve_inconsistent():
    A = np.array([[1, 0], [1, 0]], dtype=np.int64)
    b = np.array([0, 1], dtype=np.int64)
    assert solve(A, b, 2) is None


def test_mat_pow():
    A = np.array([[1, 1], [0, 1]], dtype=np.int64)
    assert (mat_pow(A, 0, 5) == np.eye(2, dtype=np.int64)).all()
    assert (mat_pow(A, 7, 5)[0, 1]) == 7 % 5


def test_inv_mod():
    for p in (2, 3, 7):
        for a in range(1, p):
            assert (a * inv_mod(a, p)) % p == 1
    with pytest.raises(ZeroDivisionError):
        inv_mod(0, 3)


@pytest.mark.parametrize("p", [2, 3])
def test_span_builder_matches_rref(p):
    rng = np.random.default_rng(30 + p)
    for _ in range(10):
        n = int(rng.integers(2, 8))
        rows = [random_matrix(rng, 1, n, p)[0] for _ in range(6)]
        sb = SpanBuilder(n, p)
        for v in rows:
            sb.add(v)
        R, pivots = rref(np.stack(rows), p)
        assert sb.rank == len(pivots)
        assert (sb.basis() == R).all()
        for v in rows:
            assert sb.contains(v)
        probe = random_matrix(rng, 1, n, p)[0]
        assert sb.contains(probe) == in_row_space(probe, R, pivots, p)


def test_row_space_idempotent():
    A = np.array([[2, 4], [1, 2], [0, 1]], dtype=np.int64)
    R1 = row_space(A, 5)
    R2 = row_space(R1, 5)
    assert (R1 == R2).all()
