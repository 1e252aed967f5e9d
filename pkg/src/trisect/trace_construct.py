"""Spread forms on V(6, q) obtained by tracing a determinant form on GF(q^2)^3.

A vector ``x`` of V(6, q) is identified with ``(x1 + rho x4, x2 + rho x5,
x3 + rho x6)`` in GF(q^2)^3.  For ``tau = beta * det`` the trace form
``T = Tr(tau)`` has coefficients ``c_i = Tr(beta rho^i)`` on the four
groups of triples listed in :data:`GROUPS`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .errors import InternalInvariantViolation, InvalidParameter, WrongParity
from .forms import TriForm, evaluate
from .geometry import LineSet, ProjLine
from .gf import ExtPair, FieldElem, ext_pair, primitive_element, trace_abs, trace_rel

# (sign, triple) groups multiplying c0, c1, c2, c3
GROUPS = (
    ((1, (1, 2, 3)),),
    ((1, (2, 3, 4)), (-1, (1, 3, 5)), (1, (1, 2, 6))),
    ((1, (1, 5, 6)), (-1, (2, 4, 6)), (1, (3, 4, 5))),
    ((1, (4, 5, 6)),),
)

CROSS_CHECK_SAMPLES = 16


@dataclass(frozen=True)
class TraceCoeffs:
    c0: FieldElem
    c1: FieldElem
    c2: FieldElem
    c3: FieldElem

    def __iter__(self):
        return iter((self.c0, self.c1, self.c2, self.c3))


@dataclass(frozen=True)
class ExtensionSetup:
    pair: ExtPair
    rho: FieldElem

    def __post_init__(self):
        if self.rho.field is not self.pair.ext:
            raise InvalidParameter(f"rho must lie in {self.pair.ext}")
        if self.pair.in_base(self.rho):
            raise InvalidParameter(f"rho={self.rho.value} lies in GF({self.q})")
        rows = [self.to_ext(np.eye(6, dtype=np.int64)[i]) for i in range(6)]
        flat = np.array([[c for x in X for c in self.pair.ext.split(x.value)] for X in rows])
        if linalg.rank(flat, self.pair.base) != 6:
            raise InternalInvariantViolation("e1..e6 do not form a basis of GF(q^2)^3")

    @property
    def q(self) -> int:
        return self.pair.base.order

    @property
    def base(self):
        return self.pair.base

    @property
    def ext(self):
        return self.pair.ext

    def to_ext(self, x) -> list[FieldElem]:
        """GF(q^2)-coordinates of ``x`` in V(6, q)."""
        x = [int(c) for c in x]
        E = self.pair.ext
        return [FieldElem(E, x[i]) + self.rho * FieldElem(E, x[i + 3]) for i in range(3)]

    @cached_property
    def _rho_split(self) -> tuple[int, int]:
        return self.pair.ext.split(self.rho.value)

    def from_ext(self, X) -> np.ndarray:
        """Inverse of :meth:`to_ext`: write ``X_i = u_i + rho v_i``."""
        F = self.pair.base
        r0, r1 = self._rho_split
        out = np.zeros(6, dtype=np.int64)
        for i, xi in enumerate(X):
            a0, a1 = self.pair.ext.split(int(xi.value if isinstance(xi, FieldElem) else xi))
            v = F.div(a1, r1)
            out[i] = F.sub(a0, F.mul(v, r0))
            out[i + 3] = v
        return out

    def to_json(self) -> dict:
        return {"q": self.q, "ext": self.pair.ext.to_json(), "rho": self.rho.coeffs()}


def rho_traces(rho: FieldElem, pair: ExtPair) -> tuple[FieldElem, FieldElem, FieldElem]:
    return tuple(trace_rel(rho**i, pair) for i in (1, 2, 3))


def choose_rho_odd(q: int, mu=None) -> FieldElem:
    """``rho`` with ``rho^(q-1) = -1``, so ``rho^2`` is a non-square of GF(q).

    Without ``mu`` this is ``zeta^(k+1)`` for ``q = 2k+1`` and the primitive
    ``zeta`` of least code.  With ``mu`` (a non-square of GF(q)) it is the
    square root of ``mu`` of least code.
    """
    pair = ext_pair(q)
    if pair.base.p == 2:
        raise WrongParity(f"q={q} is even")
    E = pair.ext
    if mu is None:
        k = (q - 1) // 2
        rho = primitive_element(E) ** (k + 1)
    else:
        m = pair.embed(pair.base(mu))
        rho = next((FieldElem(E, c) for c in range(E.order) if FieldElem(E, c) ** 2 == m), None)
        if rho is None or pair.in_base(rho):
            raise InvalidParameter(f"mu={int(m)} is not a non-square of GF({q})")
    if rho ** (q - 1) != -1:
        raise InternalInvariantViolation("rho^(q-1) != -1")
    t1, t2, t3 = rho_traces(rho, pair)
    if t1 != 0 or t3 != 0 or pair.embed(t2) != rho**2 * 2:
        raise InternalInvariantViolation("trace identities for rho failed")
    return rho


def choose_rho_even(q: int, target_mu=None) -> FieldElem:
    """``rho`` outside GF(q) with ``Tr(rho) = Tr(rho^2) = 1``.

    ``Tr(rho^3)`` is 0 when ``q = 2^h`` with ``h`` odd, and ``target_mu``
    when it is given (``h`` even, absolute trace 1).  Starts from
    ``rho0 = zeta / Tr(zeta)`` and shifts by the least ``alpha`` in GF(q)
    with ``alpha^2 + alpha = mu0 + target``, where ``mu0 = Tr(rho0^3)``.
    """
    pair = ext_pair(q)
    F, E = pair.base, pair.ext
    if F.p != 2:
        raise WrongParity(f"q={q} is odd")
    h_odd = F.degree % 2 == 1
    if target_mu is not None:
        target = F(target_mu)
        if h_odd:
            raise InvalidParameter("a target value for Tr(rho^3) needs h even")
        if trace_abs(target) != 1:
            raise InvalidParameter(f"target {target.value} has absolute trace 0")
    elif h_odd:
        target = F.zero
    else:
        target = None

    zeta = primitive_element(E)
    rho0 = zeta / pair.embed(trace_rel(zeta, pair))
    mu0 = pair.restrict(1 + rho0 + rho0**2)
    if trace_rel(rho0**3, pair) != mu0:
        raise InternalInvariantViolation("Tr(rho0^3) != 1 + rho0 + rho0^2")
    alpha = F.zero
    if target is not None:
        rhs = mu0 + target
        alpha = next((a for a in F.elements() if a * a + a == rhs), None)
        if alpha is None:
            raise InternalInvariantViolation(f"alpha^2 + alpha = {rhs.value} has no root")
    rho = rho0 + pair.embed(alpha)
    t1, t2, t3 = rho_traces(rho, pair)
    if t1 != 1 or t2 != 1 or (target is not None and t3 != target):
        raise InternalInvariantViolation("trace conditions on rho failed")
    return rho


def default_beta(pair: ExtPair) -> FieldElem:
    """``1/2`` in odd characteristic, ``1`` in characteristic 2."""
    E = pair.ext
    return E.one if pair.base.p == 2 else E.one / 2


def setup_for(q: int, mu=None, rho: FieldElem | None = None) -> ExtensionSetup:
    """Standard setup: ``choose_rho_odd`` or ``choose_rho_even`` by parity."""
    pair = ext_pair(q)
    if rho is None:
        rho = choose_rho_odd(q, mu) if pair.base.p != 2 else choose_rho_even(q, mu)
    return ExtensionSetup(pair, rho)


def trace_coeffs(beta: FieldElem, setup: ExtensionSetup) -> TraceCoeffs:
    return TraceCoeffs(*(trace_rel(beta * setup.rho**i, setup.pair) for i in range(4)))


def tau(beta: FieldElem, X, Y, Z) -> FieldElem:
    """``beta * det[X; Y; Z]`` over GF(q^2)."""
    return beta * (
        X[0] * (Y[1] * Z[2] - Y[2] * Z[1])
        - X[1] * (Y[0] * Z[2] - Y[2] * Z[0])
        + X[2] * (Y[0] * Z[1] - Y[1] * Z[0])
    )


def lift(beta, setup: ExtensionSetup, check: bool = True, seed: int = 0) -> TriForm:
    """The trivector of ``Tr(beta * det)`` in the basis e1..e6."""
    pair = setup.pair
    beta = pair.ext(beta)
    if beta.value == 0:
        raise InvalidParameter("beta must be nonzero")
    F = pair.base
    coeffs: dict[tuple[int, int, int], int] = {}
    for c, group in zip(trace_coeffs(beta, setup), GROUPS):
        for sign, t in group:
            coeffs[t] = (c if sign > 0 else -c).value
    T = TriForm(6, F, coeffs)
    if check:
        rng = random.Random(seed)
        for _ in range(CROSS_CHECK_SAMPLES):
            x, y, z = ([rng.randrange(F.order) for _ in range(6)] for _ in range(3))
            want = trace_rel(tau(beta, setup.to_ext(x), setup.to_ext(y), setup.to_ext(z)), pair)
            if evaluate(T, x, y, z) != want:
                raise InternalInvariantViolation("lifted form disagrees with Tr(tau)")
    return T


def ext_points(pair: ExtPair):
    """Normalised points of PG(2, q^2) as triples of GF(q^2) elements."""
    E = pair.ext
    Q = E.order
    one, zero = E.one, E.zero
    for x in range(Q):
        for y in range(Q):
            yield (one, FieldElem(E, x), FieldElem(E, y))
    for x in range(Q):
        yield (zero, one, FieldElem(E, x))
    yield (zero, zero, one)


def standard_spread(setup: ExtensionSetup) -> LineSet:
    """The lines ``<a, rho a>`` for the points ``<a>`` of PG(2, q^2)."""
    F = setup.base
    keys = []
    for a in ext_points(setup.pair):
        u = setup.from_ext(a)
        v = setup.from_ext([setup.rho * c for c in a])
        keys.append(ProjLine.span(u, v, F).key(F.order))
    q = setup.q
    L = LineSet(6, F, keys)
    if len(L) != q**4 + q**2 + 1:
        raise InternalInvariantViolation(f"standard spread has {len(L)} lines")
    return L


@dataclass(frozen=True)
class CubeRootVariant:
    rho: FieldElem
    setup: ExtensionSetup
    forms: dict[str, TriForm]


def rho_cube_root_variant(q: int) -> CubeRootVariant:
    """Lifts for ``rho = zeta^((q^2-1)/3)`` and ``beta`` in {1, rho, rho^2}."""
    pair = ext_pair(q)
    F, E = pair.base, pair.ext
    if F.p != 2 or F.degree % 2 == 0:
        raise WrongParity(f"q={q} is not an odd power of 2")
    rho = primitive_element(E) ** ((E.order - 1) // 3)
    t1, t2, t3 = rho_traces(rho, pair)
    if rho**3 != 1 or rho == 1 or t1 != t2 or t3 != 0:
        raise InternalInvariantViolation("cube-root choice of rho failed its trace checks")
    setup = ExtensionSetup(pair, rho)
    forms = {label: lift(b, setup) for label, b in (("1", E.one), ("rho", rho), ("rho^2", rho**2))}
    return CubeRootVariant(rho, setup, forms)
