"""Dense linear algebra over a tabulated finite field.

Matrices are numpy integer arrays of field codes.  Every routine takes the
field explicitly and works through its lookup tables, so the same code
serves prime and non-prime orders.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularMatrix
from .gf import FieldSpec


def asmat(M, dtype=np.int64, cols: int | None = None) -> np.ndarray:
    A = np.array(M, dtype=dtype)
    if A.size == 0 and cols is not None:
        return A.reshape(0, cols)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    return A


def rref(M, F: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns; zero rows are dropped."""
    add, mul, neg, inv = F.tables()
    R = asmat(M).copy()
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + nz[0]
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        R[r] = mul[inv[R[r, c]], R[r]]
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            R[others] = add[R[others], mul[neg[R[others, c]][:, None], R[r][None, :]]]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(M, F: FieldSpec) -> int:
    return len(rref(M, F)[1])


def kernel(M, F: FieldSpec) -> np.ndarray:
    """Basis (rows, in RREF) of ``{v : M v = 0}``."""
    A = asmat(M)
    n = A.shape[1]
    R, piv = rref(A, F)
    neg = F.tables().neg
    free = [c for c in range(n) if c not in piv]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(piv):
            basis[i, pc] = neg[R[r, f]]
    if len(free) == 0:
        return basis
    return rref(basis, F)[0]


def matmul(A, B, F: FieldSpec) -> np.ndarray:
    add, mul = F.tables().add, F.tables().mul
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    vec = B.ndim == 1
    if vec:
        B = B.reshape(-1, 1)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = add[out, mul[A[:, k][:, None], B[k][None, :]]]
    return out[:, 0] if vec else out


def transpose(A) -> np.ndarray:
    return np.asarray(A, dtype=np.int64).T.copy()


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def inverse(A, F: FieldSpec) -> np.ndarray:
    A = asmat(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise SingularMatrix("only square matrices are invertible")
    R, piv = rref(np.hstack([A, identity(n)]), F)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrix("matrix is singular")
    return R[:n, n:].copy()


def span_contains(basis, v, F: FieldSpec) -> bool:
    B = asmat(basis)
    if B.size == 0:
        return not np.any(v)
    return rank(np.vstack([B, asmat(v)]), F) == rank(B, F)


def same_span(A, B, F: FieldSpec) -> bool:
    A, B = asmat(A), asmat(B)
    if A.size == 0 or B.size == 0:
        return (A.size == 0 or rank(A, F) == 0) and (B.size == 0 or rank(B, F) == 0)
    ra, pa = rref(A, F)
    rb, pb = rref(B, F)
    return pa == pb and np.array_equal(ra, rb)


def scale(v, c: int, F: FieldSpec) -> np.ndarray:
    return F.tables().mul[c, np.asarray(v, dtype=np.int64)].astype(np.int64)


def vadd(u, v, F: FieldSpec) -> np.ndarray:
    return F.tables().add[np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64)].astype(np.int64)


def normalize(v, F: FieldSpec) -> np.ndarray:
    """Scale so the first nonzero coordinate is 1."""
    v = np.asarray(v, dtype=np.int64)
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        return v.copy()
    return scale(v, F.tables().inv[v[nz[0]]], F)


def random_invertible(n: int, F: FieldSpec, rng: np.random.Generator) -> np.ndarray:
    while True:
        A = rng.integers(0, F.order, size=(n, n))
        if rank(A, F) == n:
            return A.astype(np.int64)
