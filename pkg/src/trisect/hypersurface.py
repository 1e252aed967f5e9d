"""The union of the singular lines of a form on an odd-dimensional space.

A point ``<a>`` lies on a singular line exactly when the contraction of the
form by ``a`` has kernel dimension at least 2, so the union comes straight
from the per-point kernel dimensions.  Its equation is recovered by fitting:
the degree-``d`` forms vanishing on a point set are the kernel of the
evaluation matrix (points x monomials).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable

import numpy as np

from . import linalg
from .errors import WrongParity
from .forms import TriForm
from .geometry import ProjPoint, point_count, point_kernel_dims, points_array
from .gf import FieldSpec


class Kind(str, enum.Enum):
    FULL_SPACE = "FULL_SPACE"
    HYPERPLANE = "HYPERPLANE"
    QUADRIC = "QUADRIC"
    OTHER = "OTHER"


def monomials(n: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree ``d`` in ``n`` variables, fixed order."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


@dataclass(frozen=True)
class HomogPoly:
    n: int
    field: FieldSpec
    degree: int
    coeffs: dict[tuple[int, ...], int]

    def __post_init__(self):
        for e in self.coeffs:
            if len(e) != self.n or sum(e) != self.degree:
                raise ValueError(f"monomial {e} is not of degree {self.degree} in {self.n} variables")

    def evaluate(self, V) -> np.ndarray:
        """Values at the rows of ``V`` (codes)."""
        V = linalg.asmat(V)
        F = self.field
        add, mul = F.tables().add, F.tables().mul
        out = np.zeros(V.shape[0], dtype=np.int64)
        powers = _power_table(V, self.degree, F)
        for e, c in self.coeffs.items():
            term = np.full(V.shape[0], c, dtype=np.int64)
            for i, k in enumerate(e):
                if k:
                    term = mul[term, powers[k][:, i]]
            out = add[out, term]
        return out

    def symmetric_matrix(self) -> np.ndarray:
        """Gram matrix of a quadratic form in odd characteristic."""
        F = self.field
        if self.degree != 2 or F.p == 2:
            raise ValueError("symmetric matrix needs a quadratic form in odd characteristic")
        half = F.inv(2 % F.p)
        S = np.zeros((self.n, self.n), dtype=np.int64)
        for e, c in self.coeffs.items():
            idx = [i for i, k in enumerate(e) for _ in range(k)]
            i, j = idx
            if i == j:
                S[i, i] = c
            else:
                S[i, j] = S[j, i] = F.mul(c, half)
        return S

    def rank(self) -> int:
        return linalg.rank(self.symmetric_matrix(), self.field)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "degree": self.degree,
            "terms": [[list(e), self.field.coeffs(c)] for e, c in sorted(self.coeffs.items(), reverse=True)],
        }

    def __str__(self) -> str:
        parts = []
        for e, c in sorted(self.coeffs.items(), reverse=True):
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(mono if c == 1 else f"[{c}]*{mono}")
        return " + ".join(parts) or "0"


def _power_table(V: np.ndarray, d: int, F: FieldSpec) -> list[np.ndarray]:
    mul = F.tables().mul
    pw = [np.ones_like(V)]
    for _ in range(d):
        pw.append(mul[pw[-1], V])
    return pw


def evaluation_matrix(V, d: int, F: FieldSpec, n: int) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    mons = monomials(n, d)
    V = linalg.asmat(V, cols=n)
    mul = F.tables().mul
    pw = _power_table(V, d, F)
    E = np.ones((V.shape[0], len(mons)), dtype=np.int64)
    for col, e in enumerate(mons):
        for i, k in enumerate(e):
            if k:
                E[:, col] = mul[E[:, col], pw[k][:, i]]
    return E, mons


def fit_vanishing(points, d: int, F: FieldSpec, n: int | None = None) -> list[HomogPoly]:
    """Echelon basis of the degree-``d`` forms vanishing on every point.

    ``points`` is an array of coordinate rows or an iterable of
    :class:`ProjPoint`.  Over GF(2) note that ``x^2`` and ``x`` agree on
    every point, so e.g. ``x1^2 + x1*x2`` may vanish where no linear form does.
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    V = _as_rows(points, n)
    n = V.shape[1]
    E, mons = evaluation_matrix(V, d, F, n)
    K = linalg.kernel(E, F) if E.shape[0] else linalg.identity(len(mons))
    polys = [HomogPoly(n, F, d, {mons[j]: int(row[j]) for j in np.nonzero(row)[0]}) for row in K]
    for P in polys:
        if V.shape[0] and np.any(P.evaluate(V)):
            raise AssertionError("fitted polynomial does not vanish on the point set")
    return polys


def _as_rows(points, n: int | None) -> np.ndarray:
    if isinstance(points, np.ndarray):
        return linalg.asmat(points, cols=n)
    pts = list(points)
    if pts and isinstance(pts[0], ProjPoint):
        pts = [p.coords for p in pts]
    if not pts:
        if n is None:
            raise ValueError("n is required for an empty point set")
        return np.zeros((0, n), dtype=np.int64)
    return linalg.asmat(pts)


def union_indices(T: TriForm, threads: int | None = None) -> np.ndarray:
    """Sorted indices of the points lying on at least one singular line."""
    return np.nonzero(point_kernel_dims(T, threads) >= 2)[0]


def union_points(T: TriForm, threads: int | None = None) -> frozenset[ProjPoint]:
    idx = union_indices(T, threads)
    V = points_array(T.n, T.field.order)[idx]
    return frozenset(ProjPoint(int(i), tuple(int(x) for x in v)) for i, v in zip(idx, V))


def zero_set(P: HomogPoly) -> np.ndarray:
    """Indices of the points of PG(n-1, q) where ``P`` vanishes."""
    V = points_array(P.n, P.field.order)
    return np.nonzero(P.evaluate(V) == 0)[0]


@dataclass
class UnionClassification:
    kind: Kind
    basis: list[HomogPoly] = field(default_factory=list)
    rank: int | None = None
    point_count: int = 0

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "point_count": self.point_count,
            "rank": self.rank,
            "basis": [P.to_json() for P in self.basis],
        }


def classify_union(T: TriForm, threads: int | None = None) -> UnionClassification:
    """Identify the union of singular lines of ``T`` on V(2k+1, q)."""
    n, F = T.n, T.field
    if n % 2 == 0:
        raise WrongParity(f"union classification needs odd n, got {n}")
    q = F.order
    k = (n - 1) // 2
    idx = union_indices(T, threads)
    total = point_count(n, q)
    if idx.size == total:
        return UnionClassification(Kind.FULL_SPACE, point_count=int(idx.size))
    V = points_array(n, q)[idx]
    if idx.size == point_count(n - 1, q):
        span = linalg.rank(V, F)
        if span == n - 1:
            plane = fit_vanishing(V, 1, F, n)
            return UnionClassification(Kind.HYPERPLANE, plane, point_count=int(idx.size))
    d = k - 1
    basis = fit_vanishing(V, d, F, n) if d >= 1 and idx.size else []
    if d == 2 and len(basis) == 1 and np.array_equal(zero_set(basis[0]), idx):
        rank = basis[0].rank() if F.p != 2 else None
        return UnionClassification(Kind.QUADRIC, basis, rank, int(idx.size))
    return UnionClassification(Kind.OTHER, basis, point_count=int(idx.size))


def sum_of_squares(n: int, F: FieldSpec) -> HomogPoly:
    e = monomials(n, 2)
    return HomogPoly(n, F, 2, {m: 1 for m in e if max(m) == 2})


def proportional(P: HomogPoly, Q: HomogPoly) -> bool:
    if P.n != Q.n or P.degree != Q.degree:
        return False
    mons = sorted(set(P.coeffs) | set(Q.coeffs))
    return linalg.rank([[P.coeffs.get(m, 0) for m in mons], [Q.coeffs.get(m, 0) for m in mons]], P.field) == 1


def union_from_lines(lines: Iterable) -> np.ndarray:
    """Union of point sets of a :class:`~trisect.geometry.LineSet` (oracle path)."""
    P = lines.point_indices()
    return np.unique(P.ravel()) if P.size else np.zeros(0, dtype=np.int64)
