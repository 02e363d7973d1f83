"""Exact dense linear algebra over the prime field GF(p).

Matrices are numpy int64 arrays with entries reduced into [0, p).  All
routines are deterministic; bases coming out of nullspace/row-space
computations are in reduced row echelon form.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError


def as_fp(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 mod p")
    return pow(a, p - 2, p)


def mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def mat_pow(a: np.ndarray, k: int, p: int) -> np.ndarray:
    n = a.shape[0]
    out = np.eye(n, dtype=np.int64)
    base = a % p
    while k:
        if k & 1:
            out = (out @ base) % p
        base = (base @ base) % p
        k >>= 1
    return out


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    A = as_fp(a, p).copy()
    if A.ndim != 2:
        raise InputError("rref expects a 2-d array")
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        rows = np.nonzero(A[r:, c])[0]
        if rows.size == 0:
            continue
        piv = r + int(rows[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * inv_mod(int(A[r, c]), p)) % p
        col = A[:, c].copy()
        col[r] = 0
        nz = np.nonzero(col)[0]
        if nz.size:
            A[nz] = (A[nz] - np.outer(col[nz], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel {x : a x = 0}, one row per basis vector."""
    A = as_fp(a, p)
    m, n = A.shape
    R, pivots = rref(A, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-int(R[i, c])) % p
    return basis


def row_space(a: np.ndarray, p: int) -> np.ndarray:
    return rref(a, p)[0]


def mat_inv(a: np.ndarray, p: int) -> np.ndarray:
    A = as_fp(a, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise InputError("inverse of a non-square matrix")
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = rref(aug, p)
    if pivots[:n] != list(range(n)):
        raise InputError("matrix is singular mod p")
    return R[:, n:]


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of a x = b, or None if inconsistent."""
    A = as_fp(a, p)
    B = as_fp(b, p).reshape(A.shape[0], -1)
    aug = np.concatenate([A, B], axis=1)
    R, pivots = rref(aug, p)
    n = A.shape[1]
    if any(c >= n for c in pivots):
        return None
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for i, c in enumerate(pivots):
        X[c] = R[i, n:]
    return X if b.ndim > 1 else X[:, 0]


def in_row_space(v: np.ndarray, basis_rref: np.ndarray, pivots: list[int], p: int) -> bool:
    """Membership test against a basis already in reduced echelon form."""
    w = as_fp(v, p).copy()
    for i, c in enumerate(pivots):
        if w[c]:
            w = (w - w[c] * basis_rref[i]) % p
    return not w.any()


class SpanBuilder:
    """Incrementally grown row space kept in reduced echelon form.

    add() reports whether the vector enlarged the span; the running basis and
    pivot list are exposed for coordinate computations.
    """

    def __init__(self, dim: int, p: int):
        self.dim = dim
        self.p = p
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        w = as_fp(v, self.p).copy()
        for i, c in enumerate(self.pivots):
            if w[c]:
                w = (w - w[c] * self.rows[i]) % self.p
        return w

    def add(self, v: np.ndarray) -> bool:
        w = self.reduce(v)
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        w = (w * inv_mod(int(w[c]), self.p)) % self.p
        # back-substitute into existing rows to stay fully reduced
        for i in range(len(self.rows)):
            coeff = int(self.rows[i][c])
            if coeff:
                self.rows[i] = (self.rows[i] - coeff * w) % self.p
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < c:
            pos += 1
        self.rows.insert(pos, w)
        self.pivots.insert(pos, c)
        return True

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.stack(self.rows)
