"""Exact rational checks of the 7-dimensional cross product and the algebra R + V7.

The cross product is read off the Fano trivector: ``x × y · z = T(x, y, z)``
with ``e_i × e_j = e_k`` for every triple ``(i, j, k)`` of :data:`FANO7`.
Elements of the 8-dimensional algebra are pairs ``(alpha, x)`` multiplied by
``(alpha, x)(beta, y) = (alpha beta - x·y, alpha y + beta x + x × y)``.
All arithmetic uses :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .forms import FANO7

Vec = tuple[Fraction, ...]
DIM = 7
DEFAULT_SAMPLES = 10_000


@dataclass(frozen=True)
class AlgebraElem:
    scalar: Fraction
    vec: Vec

    @classmethod
    def of(cls, scalar, vec: Sequence) -> "AlgebraElem":
        return cls(Fraction(scalar), tuple(Fraction(v) for v in vec))

    def is_zero(self) -> bool:
        return self.scalar == 0 and not any(self.vec)


def vec(*xs) -> Vec:
    return tuple(Fraction(x) for x in xs)


def unit(i: int) -> Vec:
    """``e_i`` with 1-based ``i``."""
    return tuple(Fraction(int(j == i - 1)) for j in range(DIM))


ZERO: Vec = (Fraction(0),) * DIM


def dot(x: Vec, y: Vec) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def add(x: Vec, y: Vec) -> Vec:
    return tuple(a + b for a, b in zip(x, y))


def scale(c, x: Vec) -> Vec:
    return tuple(c * a for a in x)


def fano_form(x: Vec, y: Vec, z: Vec) -> Fraction:
    """The Fano trivector as a sum of 3x3 determinants."""
    total = Fraction(0)
    for i, j, k in FANO7:
        i, j, k = i - 1, j - 1, k - 1
        total += (
            x[i] * (y[j] * z[k] - y[k] * z[j])
            - x[j] * (y[i] * z[k] - y[k] * z[i])
            + x[k] * (y[i] * z[j] - y[j] * z[i])
        )
    return total


def cross(x: Vec, y: Vec) -> Vec:
    out = [Fraction(0)] * DIM
    for i, j, k in FANO7:
        i, j, k = i - 1, j - 1, k - 1
        out[k] += x[i] * y[j] - x[j] * y[i]
        out[i] += x[j] * y[k] - x[k] * y[j]
        out[j] += x[k] * y[i] - x[i] * y[k]
    return tuple(out)


def octonion_mul(a: AlgebraElem, b: AlgebraElem) -> AlgebraElem:
    s = a.scalar * b.scalar - dot(a.vec, b.vec)
    v = add(add(scale(a.scalar, b.vec), scale(b.scalar, a.vec)), cross(a.vec, b.vec))
    return AlgebraElem(s, v)


def norm(a: AlgebraElem) -> Fraction:
    return a.scalar * a.scalar + dot(a.vec, a.vec)


def random_rational(rng: random.Random, bound: int = 20, den: int = 12) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def random_vec(rng: random.Random, nonzero: bool = True) -> Vec:
    while True:
        v = tuple(random_rational(rng) for _ in range(DIM))
        if any(v) or not nonzero:
            return v


def random_elem(rng: random.Random) -> AlgebraElem:
    while True:
        a = AlgebraElem(random_rational(rng), random_vec(rng, nonzero=False))
        if not a.is_zero():
            return a


@dataclass
class Check:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "cases": self.cases, "detail": self.detail}


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"checks": [c.to_json() for c in self.checks], "all_passed": self.all_passed}


def basis_table_check() -> Check:
    """``e_i × e_j = e_k`` for the seven triples and their cyclic shifts."""
    bad = []
    cases = 0
    for i, j, k in FANO7:
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            cases += 2
            if cross(unit(a), unit(b)) != unit(c):
                bad.append(f"e{a}xe{b}")
            if cross(unit(b), unit(a)) != scale(-1, unit(c)):
                bad.append(f"e{b}xe{a}")
    return Check("basis-products", not bad, cases, ", ".join(bad))


def uniqueness_check() -> Check:
    """``cross`` agrees with the map solved from ``x × y · z = T(x, y, z)`` on the basis."""
    mismatches = 0
    for a in range(1, DIM + 1):
        for b in range(1, DIM + 1):
            solved = tuple(fano_form(unit(a), unit(b), unit(c)) for c in range(1, DIM + 1))
            if solved != cross(unit(a), unit(b)):
                mismatches += 1
    return Check("cross-from-form", mismatches == 0, DIM * DIM, f"{mismatches} mismatches" if mismatches else "")


def positivity_check(samples: int = DEFAULT_SAMPLES, seed: int = 0) -> Check:
    """``sum x_i^2 > 0`` on nonzero rational vectors and all {-1,0,1} patterns."""
    rng = random.Random(seed)
    fails = 0
    cases = 0
    for v in itertools.product((-1, 0, 1), repeat=DIM):
        if any(v):
            cases += 1
            fails += dot(vec(*v), vec(*v)) <= 0
    for _ in range(samples):
        x = random_vec(rng)
        cases += 1
        fails += dot(x, x) <= 0
    return Check("sum-of-squares-positive", fails == 0, cases)


def verify(samples: int = DEFAULT_SAMPLES, seed: int = 0) -> Report:
    rng = random.Random(seed)
    rep = Report([basis_table_check(), uniqueness_check()])
    perp = lagrange = nonsing = normmul = zerodiv = bilinear = anti = ident = 0
    for _ in range(samples):
        x, y, z = random_vec(rng), random_vec(rng), random_vec(rng)
        c = random_rational(rng)
        xy = cross(x, y)
        if fano_form(x, y, z) != dot(xy, z):
            bilinear += 1
        if cross(add(x, scale(c, z)), y) != add(xy, scale(c, cross(z, y))):
            bilinear += 1
        if cross(y, x) != scale(-1, xy) or cross(x, x) != ZERO:
            anti += 1
        if dot(xy, x) != 0 or dot(xy, y) != 0:
            perp += 1
        if dot(xy, xy) != dot(x, x) * dot(y, y) - dot(x, y) ** 2:
            lagrange += 1
        independent = dot(x, x) * dot(y, y) != dot(x, y) ** 2
        if independent and xy == ZERO:
            nonsing += 1
        a, b = random_elem(rng), random_elem(rng)
        ab = octonion_mul(a, b)
        if norm(ab) != norm(a) * norm(b):
            normmul += 1
        if ab.is_zero():
            zerodiv += 1
        one = AlgebraElem.of(1, ZERO)
        if octonion_mul(one, a) != a or octonion_mul(a, one) != a:
            ident += 1
    rep.checks += [
        Check("form-pairing", bilinear == 0, samples, f"{bilinear} failures" if bilinear else ""),
        Check("antisymmetry", anti == 0, samples),
        Check("perpendicular", perp == 0, samples),
        Check("lagrange-identity", lagrange == 0, samples),
        Check("no-singular-rational-lines", nonsing == 0, samples),
        Check("identity-element", ident == 0, samples),
        Check("norm-multiplicative", normmul == 0, samples),
        Check("no-zero-divisors", zerodiv == 0, samples),
        positivity_check(samples, seed + 1),
    ]
    return rep
