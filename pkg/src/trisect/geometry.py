"""Points and lines of PG(n-1, q) and the singular lines of a form.

Point ``<v>`` is stored normalised (first nonzero coordinate 1).  Its dense
index orders points by the base-``q`` code of ``v`` read with the first
coordinate most significant.  A line is stored as its 2 x n reduced row
echelon matrix and keyed by ``code(row1) * q**n + code(row2)``, which sorts
lines lexicographically by that matrix.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from . import kernels, linalg
from .errors import NotASpread, TooLarge
from .forms import TriForm, _contract_codes, vec_codes
from .gf import FieldSpec

MAX_POINTS = 10**8


def point_count(n: int, q: int) -> int:
    return (q**n - 1) // (q - 1)


def lines_through_point_count(d: int, q: int) -> int:
    """Number of lines through a point inside a ``d``-dimensional subspace."""
    return (q ** (d - 1) - 1) // (q - 1) if d >= 1 else 0


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("TRISECT_THREADS", "1")))
    except ValueError:
        return 1


def _check_size(n: int, q: int) -> None:
    if point_count(n, q) > MAX_POINTS:
        raise TooLarge(f"PG({n - 1},{q}) has more than {MAX_POINTS} points")
    if q ** (2 * n) >= 2**63:
        raise TooLarge(f"line keys for n={n}, q={q} overflow 64 bits")


# -- points ---------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ProjPoint:
    index: int
    coords: tuple[int, ...] = field(compare=False)


def normalize(v, F: FieldSpec) -> tuple[int, ...]:
    return tuple(int(x) for x in linalg.normalize(v, F))


def point_index(v, q: int) -> int:
    """Dense index of an already normalised vector."""
    v = [int(x) for x in v]
    n = len(v)
    lead = next(i for i, x in enumerate(v) if x)
    tail = 0
    for x in v[lead + 1:]:
        tail = tail * q + x
    return (q ** (n - 1 - lead) - 1) // (q - 1) + tail


def point_from_index(idx: int, n: int, q: int) -> tuple[int, ...]:
    return tuple(int(x) for x in kernels.pure.points_block(n, q, idx, idx + 1)[0])


def points_array(n: int, q: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    stop = point_count(n, q) if stop is None else stop
    return kernels.pure.points_block(n, q, start, stop)


def point_indices(V: np.ndarray, q: int) -> np.ndarray:
    """Vectorised :func:`point_index` for normalised rows."""
    V = np.asarray(V, dtype=np.int64)
    n = V.shape[1]
    lead = (V != 0).argmax(axis=1)
    starts = kernels.pure.point_starts(n, q)
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    tail = np.where(np.arange(n)[None, :] > lead[:, None], V, 0) @ weights
    return starts[lead] + tail


def enum_points(n: int, q: int) -> Iterator[ProjPoint]:
    """Every point of PG(n-1, q) once, in index order."""
    total = point_count(n, q)
    if total > MAX_POINTS:
        raise TooLarge(f"PG({n - 1},{q}) has {total} points")
    block = 1 << 14
    for s in range(0, total, block):
        V = points_array(n, q, s, min(total, s + block))
        for k, row in enumerate(V):
            yield ProjPoint(s + k, tuple(int(x) for x in row))


# -- lines ----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ProjLine:
    rows: tuple[tuple[int, ...], tuple[int, ...]]

    @classmethod
    def span(cls, a, b, F: FieldSpec) -> "ProjLine":
        R, piv = linalg.rref(np.vstack([np.asarray(a), np.asarray(b)]), F)
        if len(piv) != 2:
            raise ValueError("vectors do not span a line")
        return cls((tuple(int(x) for x in R[0]), tuple(int(x) for x in R[1])))

    @classmethod
    def from_key(cls, key: int, n: int, q: int) -> "ProjLine":
        key = int(key)
        qn = q**n
        return cls((_decode(key // qn, n, q), _decode(key % qn, n, q)))

    def key(self, q: int) -> int:
        n = len(self.rows[0])
        return _code(self.rows[0], q) * q**n + _code(self.rows[1], q)

    def point_indices(self, F: FieldSpec) -> list[int]:
        return sorted(int(i) for i in line_point_indices(np.array([self.key(F.order)]), len(self.rows[0]), F)[0])

    def contains(self, v, F: FieldSpec) -> bool:
        return linalg.span_contains(np.array(self.rows), v, F)


def _code(v, q: int) -> int:
    c = 0
    for x in v:
        c = c * q + int(x)
    return c


def _decode(code: int, n: int, q: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        code, d = divmod(code, q)
        out.append(d)
    return tuple(reversed(out))


def line_rows(keys: np.ndarray, n: int, q: int) -> np.ndarray:
    """(N, 2, n) canonical matrices for an array of line keys."""
    keys = np.asarray(keys, dtype=np.int64)
    qn = q**n
    codes = np.stack([keys // qn, keys % qn], axis=1)
    rows = np.empty((keys.size, 2, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        rows[:, :, j] = codes % q
        codes = codes // q
    return rows


def line_point_indices(keys: np.ndarray, n: int, F: FieldSpec) -> np.ndarray:
    """(N, q+1) indices of the points on each line."""
    add, mul = F.tables().add, F.tables().mul
    q = F.order
    R = line_rows(keys, n, q)
    pts = [R[:, 1, :]]
    for lam in range(q):
        pts.append(add[R[:, 0, :], mul[lam, R[:, 1, :]]])
    P = np.stack(pts, axis=1).reshape(-1, n)
    return point_indices(P, q).reshape(len(keys), q + 1)


class LineSet:
    """Sorted, duplicate-free set of lines of PG(n-1, q)."""

    def __init__(self, n: int, field: FieldSpec, keys: Iterable[int] | np.ndarray = ()):
        self.n = n
        self.field = field
        self.keys = np.unique(np.asarray(list(keys) if not isinstance(keys, np.ndarray) else keys, dtype=np.int64))

    @classmethod
    def from_lines(cls, n: int, field: FieldSpec, lines: Iterable[ProjLine]) -> "LineSet":
        return cls(n, field, [ln.key(field.order) for ln in lines])

    def __len__(self) -> int:
        return int(self.keys.size)

    def __iter__(self) -> Iterator[ProjLine]:
        for k in self.keys:
            yield ProjLine.from_key(int(k), self.n, self.field.order)

    def __contains__(self, line: ProjLine) -> bool:
        k = line.key(self.field.order)
        i = np.searchsorted(self.keys, k)
        return bool(i < self.keys.size and self.keys[i] == k)

    def __eq__(self, other):
        if not isinstance(other, LineSet):
            return NotImplemented
        return self.n == other.n and self.field is other.field and np.array_equal(self.keys, other.keys)

    def issubset(self, other: "LineSet") -> bool:
        return bool(np.all(np.isin(self.keys, other.keys)))

    def rows(self) -> np.ndarray:
        return line_rows(self.keys, self.n, self.field.order)

    def point_indices(self) -> np.ndarray:
        return line_point_indices(self.keys, self.n, self.field)

    def mapped(self, M) -> "LineSet":
        """Image of every line under the invertible matrix ``M`` (acting on columns)."""
        F = self.field
        M = np.asarray(M, dtype=np.int64)
        keys = []
        for R in self.rows():
            img = linalg.matmul(R, M.T, F)
            keys.append(ProjLine.span(img[0], img[1], F).key(F.order))
        return LineSet(self.n, F, keys)

    def __repr__(self) -> str:
        return f"LineSet({len(self)} lines in PG({self.n - 1},{self.field.order}))"


# -- singular lines -------------------------------------------------------

def _kernel_args(T: TriForm):
    t = T.field.tables()
    return T.tensor, t.add, t.mul, t.neg, t.inv


def _chunks(total: int, threads: int) -> list[tuple[int, int]]:
    threads = max(1, min(threads, total))
    step = -(-total // threads)
    return [(s, min(total, s + step)) for s in range(0, total, step)]


def _run_ranges(fn, T: TriForm, threads: int | None):
    n, q = T.n, T.field.order
    total = point_count(n, q)
    args = _kernel_args(T)
    threads = default_threads() if threads is None else threads
    ranges = _chunks(total, threads if kernels.compiled is not None else 1)
    if len(ranges) == 1:
        return [fn(*args, n, q, 0, total)]
    with ThreadPoolExecutor(len(ranges)) as ex:
        return list(ex.map(lambda r: fn(*args, n, q, r[0], r[1]), ranges))


def point_kernel_dims(T: TriForm, threads: int | None = None) -> np.ndarray:
    """``dim ker contract(T, a)`` for every point ``a`` in index order."""
    _check_size(T.n, T.field.order)
    return np.concatenate(_run_ranges(kernels.kernel_dims, T, threads))


def singular_lines(T: TriForm, threads: int | None = None) -> LineSet:
    """Lines ``<a, b>`` with ``T(a, b, x) = 0`` for all ``x``, via per-point kernels."""
    _check_size(T.n, T.field.order)
    parts = _run_ranges(kernels.line_keys, T, threads)
    return LineSet(T.n, T.field, np.concatenate(parts) if parts else np.zeros(0, np.int64))


def all_lines(n: int, q: int) -> Iterator[np.ndarray]:
    """Canonical matrices of every line, in blocks of shape (k, 2, n)."""
    for p1 in range(n):
        for p2 in range(p1 + 1, n):
            free1 = [c for c in range(p1 + 1, n) if c != p2]
            free2 = list(range(p2 + 1, n))
            nf = len(free1) + len(free2)
            codes = np.arange(q**nf, dtype=np.int64)
            R = np.zeros((codes.size, 2, n), dtype=np.int64)
            R[:, 0, p1] = 1
            R[:, 1, p2] = 1
            for pos, (r, c) in enumerate([(0, c) for c in free1] + [(1, c) for c in free2]):
                R[:, r, c] = (codes // q**pos) % q
            yield R


def singular_lines_bruteforce(T: TriForm) -> LineSet:
    """Filter every line of PG(n-1, q) by ``T(a, b, e_m) = 0`` for all ``m``.

    Evaluates the determinantal pairing directly from the stored
    coefficients; shares no code with the per-point kernel path.
    """
    F, n, q = T.field, T.n, T.field.order
    add, mul, neg = F.tables().add, F.tables().mul, F.tables().neg
    keys = []
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for R in all_lines(n, q):
        a, b = R[:, 0, :], R[:, 1, :]
        vals = np.zeros((R.shape[0], n), dtype=np.int64)
        for (i, j, k), c in T._c.items():
            i, j, k = i - 1, j - 1, k - 1
            # z = e_m with m in {i, j, k}; the 3x3 determinant collapses to a 2x2 minor
            for m, (u, w), sgn in ((k, (i, j), 1), (j, (i, k), -1), (i, (j, k), 1)):
                minor = add[mul[a[:, u], b[:, w]], neg[mul[a[:, w], b[:, u]]]]
                term = mul[c, minor]
                vals[:, m] = add[vals[:, m], term if sgn > 0 else neg[term]]
        ok = ~vals.any(axis=1)
        if ok.any():
            keys.append((a[ok] @ weights) * q**n + (b[ok] @ weights))
    return LineSet(n, F, np.concatenate(keys) if keys else np.zeros(0, np.int64))


# -- spreads --------------------------------------------------------------

@dataclass
class SpreadReport:
    line_count: int
    point_count: int
    coverage_min: int
    coverage_max: int
    uncovered_points: int
    is_partition: bool
    is_normal: bool | None = None
    coverage_histogram: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "line_count": self.line_count,
            "point_count": self.point_count,
            "coverage_min": self.coverage_min,
            "coverage_max": self.coverage_max,
            "uncovered_points": self.uncovered_points,
            "is_partition": self.is_partition,
            "is_normal": self.is_normal,
            "coverage_histogram": {str(k): v for k, v in sorted(self.coverage_histogram.items())},
        }


def point_coverage(L: LineSet) -> np.ndarray:
    total = point_count(L.n, L.field.order)
    if len(L) == 0:
        return np.zeros(total, dtype=np.int64)
    return np.bincount(L.point_indices().ravel(), minlength=total)


def spread_check(L: LineSet) -> SpreadReport:
    cov = point_coverage(L)
    vals, counts = np.unique(cov, return_counts=True)
    rep = SpreadReport(
        line_count=len(L),
        point_count=int(cov.size),
        coverage_min=int(cov.min()),
        coverage_max=int(cov.max()),
        uncovered_points=int((cov == 0).sum()),
        is_partition=bool(cov.min() == 1 and cov.max() == 1),
        coverage_histogram={int(v): int(c) for v, c in zip(vals, counts)},
    )
    assert rep.is_partition == (rep.uncovered_points == 0 and rep.line_count * (L.field.order + 1) == rep.point_count)
    return rep


def is_normal_spread(L: LineSet) -> bool:
    """Every solid spanned by two members is partitioned by members."""
    return normal_spread_witness(L) is None


def normal_spread_witness(L: LineSet) -> tuple[ProjLine, ProjLine] | None:
    """A pair of lines whose span is not partitioned, or ``None`` if normal."""
    F = L.field
    P = L.point_indices()
    total = point_count(L.n, F.order)
    cov = np.bincount(P.ravel(), minlength=total)
    if cov.min() != 1 or cov.max() != 1:
        raise NotASpread("line set does not partition the point set")
    point_line = np.empty(total, dtype=np.int64)
    point_line[P.ravel()] = np.repeat(np.arange(len(L)), F.order + 1)
    t = F.tables()
    ok, i, j = kernels.normal_spread(L.rows(), point_line, t.add, t.mul, t.neg, t.inv, L.n, F.order)
    if ok:
        return None
    return ProjLine.from_key(int(L.keys[i]), L.n, F.order), ProjLine.from_key(int(L.keys[j]), L.n, F.order)


def min_coverage(T: TriForm, threads: int | None = None) -> int:
    """Least number of singular lines through a point."""
    dims = point_kernel_dims(T, threads)
    d = int(dims.min())
    return lines_through_point_count(d, T.field.order) if d >= 2 else 0


def coverage_extremes(T: TriForm, threads: int | None = None) -> tuple[int, int]:
    dims = point_kernel_dims(T, threads)
    q = T.field.order
    f = lambda d: lines_through_point_count(d, q) if d >= 2 else 0  # noqa: E731
    return f(int(dims.min())), f(int(dims.max()))


# -- totally singular subspaces -------------------------------------------

@dataclass
class SearchResult:
    subspaces: list[np.ndarray]
    partial: bool
    nodes: int

    def __len__(self) -> int:
        return len(self.subspaces)


def singular_closure(T: TriForm, basis) -> np.ndarray:
    """``{v : T(w, v, x) = 0 for all w in basis, all x}`` as an RREF basis."""
    F, n = T.field, T.n
    B = linalg.asmat(basis)
    if B.size == 0:
        return linalg.identity(n)
    blocks = [_contract_codes(T, np.asarray(w, dtype=np.int64)) for w in B if np.any(w)]
    if not blocks:
        return linalg.identity(n)
    return linalg.kernel(np.vstack(blocks), F)


def is_totally_singular(T: TriForm, basis) -> bool:
    B = linalg.asmat(basis)
    for i in range(B.shape[0]):
        Bi = _contract_codes(T, B[i])
        for j in range(i + 1, B.shape[0]):
            if np.any(linalg.matmul(Bi, B[j], T.field)):
                return False
    return True


def _affine_solutions(K: np.ndarray, c: int, zero_cols: list[int], F: FieldSpec) -> Iterator[np.ndarray]:
    """Vectors ``v = lam @ K`` with v_j = 0 (j < c or j in zero_cols) and v_c = 1."""
    k, n = K.shape
    add, mul, neg = F.tables().add, F.tables().mul, F.tables().neg
    cols = list(range(c)) + [j for j in zero_cols if j > c]
    A = np.vstack([K[:, cols].T, K[:, [c]].T]) if cols else K[:, [c]].T
    rhs = np.zeros(A.shape[0], dtype=np.int64)
    rhs[-1] = 1
    R, piv = linalg.rref(np.hstack([A, rhs[:, None]]), F)
    if k in piv:
        return
    part = np.zeros(k, dtype=np.int64)
    for r, pc in enumerate(piv):
        part[pc] = R[r, k]
    null = linalg.kernel(A, F) if k - len(piv) > 0 else np.zeros((0, k), dtype=np.int64)
    q = F.order
    dn = null.shape[0]
    for code in range(q**dn):
        lam = part.copy()
        t = code
        for r in range(dn):
            t, d = divmod(t, q)
            if d:
                lam = add[lam, mul[d, null[r]]]
        v = np.zeros(n, dtype=np.int64)
        for i in np.nonzero(lam)[0]:
            v = add[v, mul[lam[i], K[i]]]
        yield v


def totally_singular_search(T: TriForm, r: int, budget: int = 1_000_000) -> SearchResult:
    """All ``r``-dimensional subspaces on which every line is singular.

    Bases are grown bottom-up in reduced echelon form: each new vector has
    its pivot left of every pivot chosen so far and zeros in those pivot
    columns, so each subspace is produced exactly once.  Candidates are drawn
    from the common kernel of the contractions of the rows already chosen.
    """
    F, n = T.field, T.n
    if not 0 < r <= n:
        raise ValueError(f"dimension {r} outside 1..{n}")
    found: list[np.ndarray] = []
    nodes = 0
    partial = False

    def grow(rows: list[np.ndarray], pivots: list[int], K: np.ndarray) -> None:
        nonlocal nodes, partial
        if len(rows) == r:
            found.append(np.array(rows[::-1], dtype=np.int64))
            return
        left = r - len(rows) - 1
        hi = pivots[-1] if pivots else n
        for c in range(left, hi):
            for v in _affine_solutions(K, c, pivots, F):
                if nodes >= budget:
                    partial = True
                    return
                nodes += 1
                K2 = _meet(K, T, v, F)
                if K2.shape[0] < r:
                    continue
                grow(rows + [v], pivots + [c], K2)
                if partial:
                    return

    grow([], [], linalg.identity(n))
    found.sort(key=lambda M: M.ravel().tolist())
    return SearchResult(found, partial, nodes)


def _meet(K: np.ndarray, T: TriForm, v: np.ndarray, F: FieldSpec) -> np.ndarray:
    """Basis of ``{x in span K : contract(T, v) x = 0}``."""
    B = _contract_codes(T, v)
    # coordinates lam with (lam @ K) in ker B  <=>  B K^T lam = 0
    M = linalg.matmul(B, K.T, F)
    lam = linalg.kernel(M, F)
    if lam.shape[0] == 0:
        return np.zeros((0, T.n), dtype=np.int64)
    return linalg.rref(linalg.matmul(lam, K, F), F)[0]


def max_totally_singular_dim(T: TriForm, budget: int = 200_000) -> tuple[int, bool]:
    """Largest ``r`` with a totally singular ``r``-space; flag if any search was cut."""
    best, cut = 1, False
    for r in range(2, T.n + 1):
        res = totally_singular_search(T, r, budget)
        cut = cut or res.partial
        if not res.subspaces:
            break
        best = r
    return best, cut
