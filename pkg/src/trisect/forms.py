"""Alternating trilinear forms and their coefficient (trivector) description.

A :class:`TriForm` stores ``c_ijk = T(e_i, e_j, e_k)`` for ``i < j < k``
(1-based, as in the usual ``f_ijk`` notation) and evaluates through the
determinantal pairing, so every other ordering is resolved by sign.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .errors import InvalidParameter, Mismatch, SingularMatrix, ZeroVector
from .gf import GF, FieldElem, FieldSpec, is_square, parse_elem, trace_abs

MAX_N = 12

Triple = tuple[int, int, int]


def triples(n: int) -> list[Triple]:
    """All 1-based ``i<j<k`` in lexicographic order (the coefficient order)."""
    return [(i + 1, j + 1, k + 1) for i, j, k in itertools.combinations(range(n), 3)]


def _sort_sign(idx: Sequence[int]) -> tuple[tuple[int, ...], int]:
    idx = list(idx)
    sign = 1
    for a in range(len(idx)):
        for b in range(len(idx) - 1 - a):
            if idx[b] > idx[b + 1]:
                idx[b], idx[b + 1] = idx[b + 1], idx[b]
                sign = -sign
    return tuple(idx), sign


def vec_codes(v, F: FieldSpec, n: int | None = None) -> np.ndarray:
    out = []
    for x in v:
        if isinstance(x, FieldElem):
            if x.field is not F:
                raise Mismatch(f"vector entry from {x.field}, expected {F}")
            out.append(x.value)
        else:
            x = int(x)
            if not 0 <= x < F.order:
                raise Mismatch(f"code {x} out of range for {F}")
            out.append(x)
    arr = np.array(out, dtype=np.int64)
    if n is not None and arr.shape != (n,):
        raise Mismatch(f"vector of length {arr.size}, expected {n}")
    return arr


class TriForm:
    """Alternating trilinear form on ``V(n, q)``."""

    def __init__(self, n: int, field: FieldSpec, coeffs: Mapping[Sequence[int], object] | None = None):
        if not 3 <= n <= MAX_N:
            raise InvalidParameter(f"dimension {n} outside 3..{MAX_N}")
        self.n = n
        self.field = field
        acc: dict[Triple, int] = {}
        for key, c in (coeffs or {}).items():
            if len(set(key)) != 3 or not all(1 <= i <= n for i in key):
                raise InvalidParameter(f"bad index triple {key} for n={n}")
            s, sign = _sort_sign(key)
            v = field(c).value if isinstance(c, FieldElem) else _as_code(c, field)
            if sign < 0:
                v = field.neg(v)
            acc[s] = field.add(acc.get(s, 0), v)
        self._c: dict[Triple, int] = {k: v for k, v in sorted(acc.items()) if v}

    # -- views --------------------------------------------------------------
    @property
    def coeffs(self) -> dict[Triple, FieldElem]:
        return {k: FieldElem(self.field, v) for k, v in self._c.items()}

    def coeff(self, i: int, j: int, k: int) -> FieldElem:
        s, sign = _sort_sign((i, j, k))
        if len(set(s)) < 3:
            return self.field.zero
        v = self._c.get(s, 0)
        return FieldElem(self.field, v if sign > 0 else self.field.neg(v))

    @cached_property
    def tensor(self) -> np.ndarray:
        """Full antisymmetric ``n x n x n`` array of codes, 0-based."""
        n, F = self.n, self.field
        C = np.zeros((n, n, n), dtype=np.int64)
        for (i, j, k), v in self._c.items():
            nv = F.neg(v)
            for perm in itertools.permutations((i - 1, j - 1, k - 1)):
                _, sign = _sort_sign(perm)
                C[perm] = v if sign > 0 else nv
        C.setflags(write=False)
        return C

    def state(self) -> int:
        """Coefficient vector packed base ``q``, first triple least significant."""
        q = self.field.order
        return sum(self._c.get(t, 0) * q**pos for pos, t in enumerate(triples(self.n)))

    @classmethod
    def from_state(cls, n: int, field: FieldSpec, state: int) -> "TriForm":
        q = field.order
        coeffs = {}
        for t in triples(n):
            state, d = divmod(state, q)
            if d:
                coeffs[t] = d
        return cls(n, field, coeffs)

    def is_zero(self) -> bool:
        return not self._c

    def __eq__(self, other):
        if not isinstance(other, TriForm):
            return NotImplemented
        return self.n == other.n and self.field is other.field and self._c == other._c

    def __hash__(self):
        return hash((self.n, id(self.field), tuple(self._c.items())))

    def __add__(self, other: "TriForm") -> "TriForm":
        _check_same(self, other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = self.field.add(out.get(k, 0), v)
        return TriForm(self.n, self.field, out)

    def scaled(self, c) -> "TriForm":
        c = _as_code(c, self.field) if not isinstance(c, FieldElem) else self.field(c).value
        return TriForm(self.n, self.field, {k: self.field.mul(c, v) for k, v in self._c.items()})

    def __repr__(self) -> str:
        return f"TriForm(n={self.n}, {self.field}, {format_form(self)!r})"

    # -- serialisation -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.field.order,
            "field": self.field.to_json(),
            "coeffs": [[i, j, k, self.field.coeffs(v)] for (i, j, k), v in self._c.items()],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "TriForm":
        F = FieldSpec.from_json(d["field"]) if "field" in d else GF(int(d["q"]))
        if F.order != int(d.get("q", F.order)):
            raise InvalidParameter("field description disagrees with q")
        coeffs = {}
        for i, j, k, c in d["coeffs"]:
            coeffs[(i, j, k)] = F.from_coeffs(c) if isinstance(c, list) else F(int(c))
        return cls(int(d["n"]), F, coeffs)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class SkewMatrix:
    field: FieldSpec
    n: int
    entries: np.ndarray

    def kernel(self) -> np.ndarray:
        return linalg.kernel(self.entries, self.field)

    def apply(self, v) -> np.ndarray:
        return linalg.matmul(self.entries, vec_codes(v, self.field, self.n), self.field)

    def is_skew(self) -> bool:
        neg = self.field.tables().neg
        E = self.entries
        return bool(np.all(np.diag(E) == 0) and np.array_equal(E.T, neg[E]))


def _as_code(c, F: FieldSpec) -> int:
    """Ints in coefficient position are field codes."""
    if isinstance(c, FieldElem):
        return F(c).value
    return F(int(c)).value


def _check_same(S: TriForm, T: TriForm) -> None:
    if S.n != T.n or S.field is not T.field:
        raise Mismatch("forms live on different spaces")


# -- operations -------------------------------------------------------------

def _det3(F: FieldSpec, m: list[list[int]]) -> int:
    a, mul, sub = F.add, F.mul, F.sub
    (x0, x1, x2), (y0, y1, y2), (z0, z1, z2) = m
    t0 = mul(x0, sub(mul(y1, z2), mul(y2, z1)))
    t1 = mul(x1, sub(mul(y0, z2), mul(y2, z0)))
    t2 = mul(x2, sub(mul(y0, z1), mul(y1, z0)))
    return a(sub(t0, t1), t2)


def evaluate(T: TriForm, x, y, z) -> FieldElem:
    """``sum c_ijk * det`` of the ``(i,j,k)`` columns of the rows ``x, y, z``."""
    F, n = T.field, T.n
    xs, ys, zs = (vec_codes(v, F, n) for v in (x, y, z))
    acc = 0
    for (i, j, k), c in T._c.items():
        cols = (i - 1, j - 1, k - 1)
        m = [[int(r[c_]) for c_ in cols] for r in (xs, ys, zs)]
        acc = F.add(acc, F.mul(c, _det3(F, m)))
    return FieldElem(F, acc)


def contract(T: TriForm, a) -> SkewMatrix:
    """The alternating bilinear form ``B_a(x, y) = T(a, x, y)`` as a matrix."""
    F = T.field
    av = vec_codes(a, F, T.n)
    if not np.any(av):
        raise ZeroVector("contraction with the zero vector")
    return SkewMatrix(F, T.n, _contract_codes(T, av))


def _contract_codes(T: TriForm, av: np.ndarray) -> np.ndarray:
    add, mul = T.field.tables().add, T.field.tables().mul
    C = T.tensor
    B = np.zeros((T.n, T.n), dtype=np.int64)
    for i in np.nonzero(av)[0]:
        B = add[B, mul[av[i], C[i]]]
    return B.astype(np.int64)


def radical(T: TriForm) -> list[np.ndarray]:
    """RREF basis of ``{a : T(a, x, y) = 0 for all x, y}``."""
    n = T.n
    M = T.tensor.transpose(1, 2, 0).reshape(n * n, n)
    return list(linalg.kernel(M, T.field))


def transform(T: TriForm, A) -> TriForm:
    """The form ``(x, y, z) -> T(Ax, Ay, Az)``; a right action."""
    F, n = T.field, T.n
    A = np.asarray(A, dtype=np.int64)
    if A.shape != (n, n):
        raise Mismatch(f"matrix shape {A.shape}, expected {(n, n)}")
    if linalg.rank(A, F) < n:
        raise SingularMatrix("transform needs an invertible matrix")
    cols = [A[:, i] for i in range(n)]
    coeffs = {}
    for t in triples(n):
        v = evaluate(T, *(cols[i - 1] for i in t)).value
        if v:
            coeffs[t] = v
    return TriForm(n, F, coeffs)


# -- named forms ------------------------------------------------------------

FANO7 = [(1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3)]

CATALOG_NAMES = (
    "fano7",
    "spread_odd",
    "spread_even_hodd",
    "spread_even_heven",
    "t_prime",
    "t_double_prime",
    "ts6",
    "ts10",
)


def _pattern(name: str, F: FieldSpec, mu: int) -> tuple[int, dict[Triple, int]]:
    neg_mu = F.neg(mu)
    if name == "fano7":
        return 7, {t: 1 for t in FANO7}
    if name == "spread_odd":
        return 6, {(1, 2, 3): 1, (1, 5, 6): mu, (2, 4, 6): neg_mu, (3, 4, 5): mu}
    if name == "spread_even_hodd":
        return 6, {t: 1 for t in [(2, 3, 4), (1, 3, 5), (1, 2, 6), (1, 5, 6), (2, 4, 6), (3, 4, 5)]}
    if name == "spread_even_heven":
        base = {t: 1 for t in [(2, 3, 4), (1, 3, 5), (1, 2, 6), (1, 5, 6), (2, 4, 6), (3, 4, 5)]}
        base[(4, 5, 6)] = mu
        return 6, base
    if name == "t_prime":
        return 6, {t: 1 for t in [(1, 5, 6), (2, 4, 6), (3, 4, 5), (1, 2, 3), (4, 5, 6)]}
    if name == "t_double_prime":
        return 6, {t: 1 for t in [(2, 3, 4), (1, 3, 5), (1, 2, 6), (1, 2, 3), (4, 5, 6)]}
    if name == "ts6":
        return 6, {t: 1 for t in [(1, 5, 6), (2, 4, 6), (3, 4, 5)]}
    if name == "ts10":
        return 10, {t: 1 for t in [(1, 7, 10), (2, 8, 10), (3, 9, 10), (4, 8, 9), (5, 7, 9), (6, 7, 8)]}
    raise InvalidParameter(f"unknown catalog form {name!r}; choose from {', '.join(CATALOG_NAMES)}")


def catalog(name: str, q: int | FieldSpec, mu=None, *, strict: bool = True) -> TriForm:
    """Build one of the named forms over ``GF(q)``.

    ``mu`` is required by ``spread_odd`` (a non-square, odd ``q``) and
    ``spread_even_heven`` (absolute trace 1, ``q = 2^h`` with ``h`` even).
    An int ``mu`` is read as a field code.  ``strict=False`` skips the
    parameter checks, which negative controls rely on.
    """
    F = q if isinstance(q, FieldSpec) else GF(int(q))
    mu_e = None
    if name in ("spread_odd", "spread_even_heven"):
        if mu is None:
            raise InvalidParameter(f"{name} needs a parameter mu")
        mu_e = F(mu)
    if strict:
        _validate(name, F, mu_e)
    n, pat = _pattern(name, F, mu_e.value if mu_e is not None else 0)
    return TriForm(n, F, pat)


def _validate(name: str, F: FieldSpec, mu: FieldElem | None) -> None:
    even = F.p == 2
    if name == "spread_odd":
        if even:
            raise InvalidParameter("spread_odd needs odd q")
        if mu.value == 0 or is_square(mu):
            raise InvalidParameter(f"mu={mu.value} must be a non-square in {F}")
    elif name == "spread_even_hodd" or name in ("t_prime", "t_double_prime"):
        if not even or F.h % 2 == 0:
            raise InvalidParameter(f"{name} needs q = 2^h with h odd, got {F.order}")
    elif name == "spread_even_heven":
        if not even or F.h % 2 == 1:
            raise InvalidParameter(f"{name} needs q = 2^h with h even, got {F.order}")
        if trace_abs(mu) != 1:
            raise InvalidParameter(f"mu={mu.value} must have absolute trace 1")


# -- text grammar -------------------------------------------------------------

_TERM = re.compile(r"\s*([+-]?)\s*(?:([A-Za-z]+|\d+|\[\d+\])\s*\*\s*)?f\s*([0-9xyzXYZ_,]+)\s*")
_DIGIT = {"x": 10, "y": 11, "z": 12}


def _indices(tok: str) -> tuple[int, ...]:
    if "_" in tok or "," in tok:
        return tuple(int(t) for t in re.split(r"[_,]", tok) if t)
    return tuple(_DIGIT[c.lower()] if c.lower() in _DIGIT else int(c) for c in tok)


def parse_form(text: str, q: int | FieldSpec, n: int | None = None, mu=None) -> TriForm:
    """Parse ``"f124+f235-f135"`` / ``"mu*f456"`` / ``"2*f1_7_10"``.

    Single-character indices use ``x, y, z`` for 10, 11, 12; underscores or
    commas separate multi-digit indices.  Integer coefficients are integer
    multiples of 1, ``[c]`` is the element with code ``c``; ``mu`` is bound by the argument of the same name.
    """
    F = q if isinstance(q, FieldSpec) else GF(int(q))
    pos = 0
    terms = []
    text = text.strip()
    if not text or text == "0":
        if n is None:
            raise InvalidParameter("empty form needs an explicit dimension")
        return TriForm(n, F)
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise InvalidParameter(f"cannot parse form text at {text[pos:]!r}")
        sign, coef, idx = m.groups()
        if pos > 0 and not sign:
            raise InvalidParameter(f"missing '+' or '-' before {text[pos:]!r}")
        key = _indices(idx)
        if len(key) != 3:
            raise InvalidParameter(f"term f{idx} needs exactly three indices")
        if coef is None:
            c = F.one
        elif coef.isdigit():
            c = F.from_int(int(coef))
        elif coef.startswith("["):
            c = F(int(coef[1:-1]))
        elif coef.lower() == "mu":
            if mu is None:
                raise InvalidParameter("form text uses mu but no value was bound")
            c = mu if isinstance(mu, FieldElem) else parse_elem(F, str(mu))
        else:
            raise InvalidParameter(f"unknown coefficient symbol {coef!r}")
        terms.append((key, -c if sign == "-" else c))
        pos = m.end()
    dim = n if n is not None else max(max(k) for k, _ in terms)
    dim = max(dim, 3)
    T = TriForm(dim, F)
    for key, c in terms:
        T = T + TriForm(dim, F, {key: c})
    return T


def format_form(T: TriForm) -> str:
    parts = []
    for (i, j, k), v in T._c.items():
        idx = "".join(str(i) if i < 10 else "xyz"[i - 10] for i in (i, j, k))
        if v == 1:
            term = f"f{idx}"
        elif T.field.neg(v) == 1 and T.field.p != 2:
            parts.append(f"-f{idx}")
            continue
        else:
            term = f"{v}*f{idx}" if T.field.h == 1 or v < T.field.p else f"[{v}]*f{idx}"
        parts.append(("+" if parts else "") + term)
    return "".join(parts) or "0"


def random_form(n: int, F: FieldSpec, rng: np.random.Generator, density: float = 1.0) -> TriForm:
    coeffs = {}
    for t in triples(n):
        if rng.random() < density:
            coeffs[t] = int(rng.integers(0, F.order))
    return TriForm(n, F, {t: F(c) for t, c in coeffs.items()})


def unit_forms(n: int, F: FieldSpec) -> Iterable[TriForm]:
    for t in triples(n):
        yield TriForm(n, F, {t: 1})
