"""Orbit counting for trivectors under GL(n, q).

Exact ratios ``q^C(n,3) / |GL(n,q)|``, orbit partitions of the whole
coefficient space by breadth-first closure under generators, an
independent Burnside count over conjugacy classes, and GL-invariant
fingerprints.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, prod

import numpy as np

from . import kernels, linalg
from .errors import InvalidParameter, TooLarge
from .forms import TriForm, radical, triples
from .geometry import (
    lines_through_point_count,
    max_totally_singular_dim,
    point_count,
    point_kernel_dims,
)
from .gf import FieldSpec, GF, _monic_polys, is_irreducible, primitive_element

MAX_STATES = 2**24

# q = 2 orbit ratios as usually quoted; strings keep the quoted precision
REFERENCE_RATIOS_Q2 = {
    5: "0.00010",
    6: "0.000053",
    7: "0.00021",
    8: "0.0135",
    9: "27.6",
    10: "3.6e6",
    11: "6.1e13",
}


def gl_order(n: int, q: int) -> int:
    return prod(q**n - q**i for i in range(n))


@dataclass(frozen=True)
class BigRatio:
    value: Fraction

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def __float__(self) -> float:
        return float(self.value)

    def to_json(self) -> dict:
        return {"numerator": str(self.numerator), "denominator": str(self.denominator), "float": float(self)}


def orbit_ratio(n: int, q: int) -> BigRatio:
    if n < 3:
        raise InvalidParameter("n must be at least 3")
    return BigRatio(Fraction(q ** comb(n, 3), gl_order(n, q)))


# -- action on the coefficient space --------------------------------------

def _det3(F: FieldSpec, m) -> int:
    add, mul, neg = F.add, F.mul, F.neg
    a = mul(m[0][0], add(mul(m[1][1], m[2][2]), neg(mul(m[1][2], m[2][1]))))
    b = mul(m[0][1], add(mul(m[1][0], m[2][2]), neg(mul(m[1][2], m[2][0]))))
    c = mul(m[0][2], add(mul(m[1][0], m[2][1]), neg(mul(m[1][1], m[2][0]))))
    return add(add(a, neg(b)), c)


def wedge_matrix(A, F: FieldSpec) -> np.ndarray:
    """Matrix of ``T -> transform(T, A)`` on coefficient vectors.

    Entry ``[u, t]`` is the coefficient at triple ``u`` of the image of the
    unit form at triple ``t``: the 3x3 minor of ``A`` on rows ``t``,
    columns ``u``.
    """
    A = np.asarray(A, dtype=np.int64)
    ts = triples(A.shape[0])
    M = np.zeros((len(ts), len(ts)), dtype=np.int64)
    for ci, u in enumerate(ts):
        for ri, t in enumerate(ts):
            M[ci, ri] = _det3(F, [[int(A[r - 1, c - 1]) for c in u] for r in t])
    return M


def gl_generators(n: int, q: int) -> list[np.ndarray]:
    """Cyclic permutation, the transvection I + E12 and diag(xi, 1, ..., 1).

    ``xi`` is the primitive element of least code; the diagonal generator is
    left out for ``q = 2``.
    """
    F = GF(q)
    cyc = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        cyc[(i + 1) % n, i] = 1
    tv = linalg.identity(n)
    tv[0, 1] = 1
    gens = [cyc, tv]
    if q > 2:
        d = linalg.identity(n)
        d[0, 0] = primitive_element(F).value
        gens.append(d)
    return gens


def generated_group_order(gens, F: FieldSpec, cap: int = 2_000_000) -> int:
    """Size of the group generated by ``gens`` (orbit of the identity)."""
    n = gens[0].shape[0]
    start = linalg.identity(n)
    seen = {start.astype(np.int64).tobytes()}
    frontier = [start]
    while frontier:
        nxt = []
        for X in frontier:
            for g in gens:
                Y = linalg.matmul(g, X, F)
                key = Y.astype(np.int64).tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(Y)
                    if len(seen) > cap:
                        raise TooLarge(f"group has more than {cap} elements")
        frontier = nxt
    return len(seen)


# -- orbit partitions -----------------------------------------------------

@dataclass(frozen=True)
class Orbit:
    rep: int
    size: int


class OrbitPartition:
    """Orbits of GL(n, q) on packed coefficient states.

    ``labels[s]`` is the least state in the orbit of ``s``; packing follows
    :meth:`TriForm.state`.
    """

    def __init__(self, n: int, field: FieldSpec, labels: np.ndarray):
        self.n = n
        self.field = field
        self.labels = labels
        reps, sizes = np.unique(labels, return_counts=True)
        self.orbits = [Orbit(int(r), int(s)) for r, s in zip(reps, sizes)]

    def __len__(self) -> int:
        return len(self.orbits)

    def orbit_of(self, T: TriForm) -> int:
        return int(self.labels[T.state()])

    def same_orbit(self, S: TriForm, T: TriForm) -> bool:
        return self.orbit_of(S) == self.orbit_of(T)

    def members(self, rep: int) -> np.ndarray:
        return np.nonzero(self.labels == rep)[0]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.field.order,
            "orbit_count": len(self),
            "orbits": [
                {"rep": o.rep, "size": o.size, "form": _format_state(self.n, self.field, o.rep)}
                for o in self.orbits
            ],
        }


def _format_state(n: int, F: FieldSpec, s: int) -> str:
    from .forms import format_form

    return format_form(TriForm.from_state(n, F, s))


def orbit_partition(n: int, q: int, generators=None) -> OrbitPartition:
    F = GF(q)
    m = comb(n, 3)
    if q**m > MAX_STATES:
        raise TooLarge(f"{q}^{m} states exceed the cap of {MAX_STATES}")
    gens = gl_generators(n, q) if generators is None else [np.asarray(g, dtype=np.int64) for g in generators]
    t = F.tables()
    perms = np.stack([kernels.wedge_perm(wedge_matrix(g, F), t.add, t.mul, q, m) for g in gens])
    return OrbitPartition(n, F, kernels.orbit_labels(perms))


# -- Burnside count over conjugacy classes --------------------------------

def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _companion(g, p) -> np.ndarray:
    k = len(g) - 1
    C = np.zeros((k, k), dtype=np.int64)
    for i in range(1, k):
        C[i, i - 1] = 1
    for i in range(k):
        C[i, k - 1] = (-g[i]) % p
    return C


def _partitions(k: int, largest: int | None = None):
    if k == 0:
        yield ()
        return
    largest = k if largest is None else largest
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def _phi(m: int, t: Fraction) -> Fraction:
    return prod((1 - t**k for k in range(1, m + 1)), start=Fraction(1))


def _centralizer_part(lam: tuple[int, ...], Q: int) -> Fraction:
    size = sum(lam)
    nl = sum(i * x for i, x in enumerate(lam))
    mult: dict[int, int] = {}
    for x in lam:
        mult[x] = mult.get(x, 0) + 1
    return Fraction(Q) ** (size + 2 * nl) * prod((_phi(mi, Fraction(1, Q)) for mi in mult.values()), start=Fraction(1))


@lru_cache(maxsize=None)
def _irreducibles(p: int, maxdeg: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for d in range(1, maxdeg + 1):
        for g in _monic_polys(d, p):
            if g != [0, 1] and is_irreducible(g, p):
                out.append(tuple(g))
    return tuple(out)


def conjugacy_classes(n: int, p: int):
    """``(representative, centralizer order)`` for every class of GL(n, p), p prime."""
    polys = _irreducibles(p, n)

    def assign(i: int, left: int):
        if left == 0:
            yield []
            return
        if i == len(polys):
            return
        yield from assign(i + 1, left)
        d = len(polys[i]) - 1
        for k in range(1, left // d + 1):
            for lam in _partitions(k):
                for rest in assign(i + 1, left - d * k):
                    yield [(polys[i], lam)] + rest

    for data in assign(0, n):
        blocks = []
        cent = Fraction(1)
        for f, lam in data:
            cent *= _centralizer_part(lam, p ** (len(f) - 1))
            for part in lam:
                g = [1]
                for _ in range(part):
                    g = _poly_mul(g, list(f), p)
                blocks.append(_companion(g, p))
        A = np.zeros((n, n), dtype=np.int64)
        pos = 0
        for B in blocks:
            k = B.shape[0]
            A[pos:pos + k, pos:pos + k] = B
            pos += k
        if cent.denominator != 1:
            raise AssertionError("centralizer order is not an integer")
        yield A, int(cent)


def burnside_orbit_count(n: int, q: int) -> int:
    """Number of GL(n, q) orbits on trivectors, by averaging fixed points."""
    F = GF(q)
    if F.degree != 1:
        raise InvalidParameter("class enumeration is implemented for prime q only")
    m = comb(n, 3)
    G = gl_order(n, q)
    total = Fraction(0)
    covered = 0
    t = F.tables()
    for A, c in conjugacy_classes(n, q):
        M = wedge_matrix(A, F)
        D = t.add[M, t.neg[linalg.identity(m)]]
        fixed = q ** (m - linalg.rank(D, F))
        total += Fraction(fixed, c)
        covered += G // c
    if covered != G:
        raise AssertionError(f"class sizes sum to {covered}, expected {G}")
    if total.denominator != 1:
        raise AssertionError("Burnside average is not an integer")
    return int(total)


# -- fingerprints ---------------------------------------------------------

@dataclass(frozen=True)
class Fingerprint:
    radical_dim: int
    line_count: int
    coverage_min: int
    coverage_max: int
    ts_max_dim: int
    ts_partial: bool
    union_kind: str | None

    def to_json(self) -> dict:
        return asdict(self)


def _line_stats(dims: np.ndarray, q: int) -> tuple[int, int, int]:
    lut = np.array([lines_through_point_count(d, q) if d >= 2 else 0 for d in range(int(dims.max()) + 1)])
    per_point = lut[dims]
    return int(per_point.sum()) // (q + 1), int(per_point.min()), int(per_point.max())


def fingerprint(T: TriForm, budget: int = 200_000) -> Fingerprint:
    from .hypersurface import classify_union

    q = T.field.order
    dims = point_kernel_dims(T)
    lines, cmin, cmax = _line_stats(dims, q)
    ts, partial = max_totally_singular_dim(T, budget)
    kind = classify_union(T).kind.value if T.n % 2 == 1 else None
    return Fingerprint(len(radical(T)), lines, cmin, cmax, ts, partial, kind)


def tensors_from_states(states: np.ndarray, n: int, F: FieldSpec) -> np.ndarray:
    """Stack of full antisymmetric tensors for packed states."""
    q = F.order
    neg = F.tables().neg
    states = np.asarray(states, dtype=np.int64)
    C = np.zeros((states.size, n, n, n), dtype=np.int64)
    t = states.copy()
    for i, j, k in triples(n):
        c = t % q
        t //= q
        nc = neg[c]
        i, j, k = i - 1, j - 1, k - 1
        C[:, i, j, k] = C[:, j, k, i] = C[:, k, i, j] = c
        C[:, j, i, k] = C[:, i, k, j] = C[:, k, j, i] = nc
    return C


def invariant_table(n: int, q: int, states=None, chunk: int = 1 << 14) -> np.ndarray:
    """Cheap invariants ``(radical_dim, line_count, coverage_min, coverage_max)`` per state.

    All four come from the kernel dimension of the contraction at each point;
    the radical dimension ``r`` is read off from the ``(q^r-1)/(q-1)``
    points whose contraction vanishes.
    """
    F = GF(q)
    m = comb(n, 3)
    states = np.arange(q**m, dtype=np.int64) if states is None else np.asarray(states, dtype=np.int64)
    t = F.tables()
    out = np.empty((states.size, 4), dtype=np.int64)
    lut = np.array([lines_through_point_count(d, q) if d >= 2 else 0 for d in range(n + 1)])
    rad_of = {point_count(r, q) if r else 0: r for r in range(n + 1)}
    for s in range(0, states.size, chunk):
        C = tensors_from_states(states[s:s + chunk], n, F)
        D = kernels.kernel_dims_many(C, t.add, t.mul, t.neg, t.inv, n, q).astype(np.int64)
        per = lut[D]
        out[s:s + chunk, 0] = [rad_of[int(x)] for x in (D == n).sum(axis=1)]
        out[s:s + chunk, 1] = per.sum(axis=1) // (q + 1)
        out[s:s + chunk, 2] = per.min(axis=1)
        out[s:s + chunk, 3] = per.max(axis=1)
    return out


@dataclass
class OrbitCheck:
    n: int
    q: int
    orbit_count: int
    sizes_sum_ok: bool
    sizes_divide_ok: bool
    zero_singleton: bool
    invariants_constant: bool
    fingerprints_checked: int
    fingerprints_constant: bool

    @property
    def ok(self) -> bool:
        return all((self.sizes_sum_ok, self.sizes_divide_ok, self.zero_singleton,
                    self.invariants_constant, self.fingerprints_constant))

    def to_json(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def check_orbits(P: OrbitPartition, samples_per_orbit: int | None = None, seed: int = 0) -> OrbitCheck:
    """Structural checks on a partition plus invariance of fingerprints.

    The cheap invariants are compared on every state.  Full fingerprints
    are compared on every state when ``samples_per_orbit`` is None, else on
    the representative and up to that many seeded random members per orbit.
    """
    n, F = P.n, P.field
    q = F.order
    m = comb(n, 3)
    G = gl_order(n, q)
    sizes = [o.size for o in P.orbits]
    inv = invariant_table(n, q)
    constant = bool(np.all(inv == inv[P.labels]))
    rng = np.random.default_rng(seed)
    checked = 0
    fp_ok = True
    for o in P.orbits:
        members = P.members(o.rep)
        if samples_per_orbit is not None and members.size > samples_per_orbit + 1:
            members = np.concatenate([[o.rep], rng.choice(members, samples_per_orbit, replace=False)])
        ref = fingerprint(TriForm.from_state(n, F, o.rep))
        for s in members:
            checked += 1
            if fingerprint(TriForm.from_state(n, F, int(s))) != ref:
                fp_ok = False
    return OrbitCheck(
        n=n,
        q=q,
        orbit_count=len(P),
        sizes_sum_ok=sum(sizes) == q**m,
        sizes_divide_ok=all(G % s == 0 for s in sizes),
        zero_singleton=P.orbits[0].rep == 0 and P.orbits[0].size == 1,
        invariants_constant=constant,
        fingerprints_checked=checked,
        fingerprints_constant=fp_ok,
    )


def significant_digits(text: str) -> int:
    mant = text.lower().split("e")[0].replace(".", "").lstrip("0")
    return max(1, len(mant))


def _same_digits(x: float, ref: str) -> bool:
    """Does ``x`` round to ``ref`` at the precision ``ref`` is quoted with?"""
    d = significant_digits(ref) - 1
    return f"{x:.{d}e}" == f"{float(ref):.{d}e}"


def table_rows(q: int = 2, ns=range(5, 12)) -> list[dict]:
    rows = []
    for n in ns:
        r = orbit_ratio(n, q)
        row = {"n": n, "q": q, **r.to_json()}
        ref = REFERENCE_RATIOS_Q2.get(n) if q == 2 else None
        if ref is not None:
            row["reference"] = ref
            row["relative_error"] = abs(float(r) - float(ref)) / float(ref)
            row["rounds_to_reference"] = _same_digits(float(r), ref)
        rows.append(row)
    return rows


def brute_gl_order(n: int, q: int) -> int:
    """Count invertible n x n matrices by enumeration (tiny cases only)."""
    F = GF(q)
    if q ** (n * n) > 1 << 20:
        raise TooLarge("too many matrices to enumerate")
    count = 0
    for code in range(q ** (n * n)):
        A = np.array([(code // q**i) % q for i in range(n * n)]).reshape(n, n)
        if linalg.rank(A, F) == n:
            count += 1
    return count


__all__ = [
    "REFERENCE_RATIOS_Q2", "gl_order", "BigRatio", "orbit_ratio", "wedge_matrix", "gl_generators",
    "generated_group_order", "Orbit", "OrbitPartition", "orbit_partition", "conjugacy_classes",
    "burnside_orbit_count", "Fingerprint", "fingerprint", "invariant_table", "OrbitCheck",
    "check_orbits", "table_rows", "brute_gl_order", "tensors_from_states",
]
