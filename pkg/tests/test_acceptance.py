"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python tests/test_acceptance.py``.
"""

import time
from math import comb

import numpy as np
import pytest

from trisect import census, crossalg, forms, geometry as g, hypersurface as hs, linalg
from trisect.forms import catalog
from trisect.gf import GF, is_square, trace_abs

RESULTS: list[str] = []


def report(num: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"CRITERION {num:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    RESULTS.append(line)
    print("\n" + line)
    assert ok, line


def spread_summary(T):
    L = g.singular_lines(T)
    rep = g.spread_check(L)
    normal = g.is_normal_spread(L) if rep.is_partition else False
    return rep.line_count, rep.is_partition, normal


def test_criterion_01_odd_spreads():
    bad, cases, slowest = [], 0, 0.0
    for q, expected in ((3, 91), (5, 651), (7, 2451)):
        F = GF(q)
        for mu in range(1, q):
            if is_square(F(mu)):
                continue
            t0 = time.perf_counter()
            count, part, normal = spread_summary(catalog("spread_odd", q, mu))
            slowest = max(slowest, time.perf_counter() - t0)
            cases += 1
            if not (count == expected == q**4 + q**2 + 1 and part and normal):
                bad.append((q, mu, count, part, normal))
    report(1, "odd q: normal spreads for every non-square mu", not bad and slowest < 120,
           f"{cases} cases, slowest {slowest:.1f}s" + (f", failures {bad}" if bad else ""))


def test_criterion_02_even_spreads():
    bad = []
    forms_ = [(2, catalog("spread_even_hodd", 2)), (8, catalog("spread_even_hodd", 8))]
    forms_ += [(4, catalog("spread_even_heven", 4, mu)) for mu in range(4) if trace_abs(GF(4)(mu)) == 1]
    for q, T in forms_:
        count, part, normal = spread_summary(T)
        if not (count == q**4 + q**2 + 1 and part and normal):
            bad.append((q, count, part, normal))
    report(2, "even q: trace forms give normal spreads (q = 2, 4, 8)", not bad, f"{len(forms_)} cases")


def test_criterion_03_negative_controls():
    bad = []
    for q in (3, 5, 7):
        F = GF(q)
        for mu in range(1, q):
            if is_square(F(mu)) and g.spread_check(g.singular_lines(catalog("spread_odd", q, mu, strict=False))).is_partition:
                bad.append(("odd", q, mu))
    plane = np.array([[1, 0, 0, 1, 0, 0], [0, 1, 0, 0, 1, 0], [0, 0, 1, 0, 0, 1]])
    for q in (2, 4, 8):
        F = GF(q)
        T = catalog("spread_odd", q, 1, strict=False)
        L = g.singular_lines(T)
        if g.spread_check(L).is_partition:
            bad.append(("even partition", q))
        # every line of the plane: all pairs of its points span singular lines
        pts = linalg.matmul(g.points_array(3, q), plane, F)
        lines = {g.ProjLine.span(pts[i], pts[j], F) for i in range(len(pts)) for j in range(i + 1, len(pts))}
        if len(lines) != q * q + q + 1 or not g.LineSet.from_lines(6, F, lines).issubset(L):
            bad.append(("plane", q))
    report(3, "square mu / mu = 1 fail; plane <e1+e4, e2+e5, e3+e6> all singular", not bad, str(bad) if bad else "")


def test_criterion_04_alternative_forms():
    bad = []
    for q in (2, 8):
        for name in ("t_prime", "t_double_prime"):
            count, part, normal = spread_summary(catalog(name, q))
            if not (count == q**4 + q**2 + 1 and part and normal):
                bad.append((name, q))
    report(4, "t' and t'' give Desarguesian spreads for q = 2, 8", not bad, str(bad) if bad else "")


def test_criterion_05_fano_union():
    bad = []
    for q in (2, 4, 8):
        F = GF(q)
        c = hs.classify_union(catalog("fano7", q))
        plane = hs.HomogPoly(7, F, 1, {tuple(int(i == j) for j in range(7)): 1 for i in range(7)})
        if not (c.kind == hs.Kind.HYPERPLANE and len(c.basis) == 1 and hs.proportional(c.basis[0], plane)):
            bad.append((q, c.kind.value))
    for q in (3, 5, 7):
        F = GF(q)
        c = hs.classify_union(catalog("fano7", q))
        if not (c.kind == hs.Kind.QUADRIC and c.rank == 7 and len(c.basis) == 1
                and hs.proportional(c.basis[0], hs.sum_of_squares(7, F))):
            bad.append((q, c.kind.value, c.rank))
    report(5, "Fano form: hyperplane sum x_i (even q), rank-7 quadric sum x_i^2 (odd q)", not bad,
           str(bad) if bad else "")


def test_criterion_06_coverage():
    rng = np.random.default_rng(2024)
    worst = {}
    for q in (2, 3):
        for n in (4, 6):
            worst[(q, n)] = min(g.min_coverage(forms.random_form(n, GF(q), rng)) for _ in range(1000))
    report(6, "even n: every point on a singular line (1000 random forms per case)",
           all(v >= 1 for v in worst.values()), f"min coverage {worst}")


def test_criterion_07_totally_singular():
    ok = True
    t0 = time.perf_counter()
    for q in (2, 3):
        T = catalog("ts6", q)
        r3 = g.totally_singular_search(T, 3)
        r4 = g.totally_singular_search(T, 4)
        ok &= len(r3) == 1 and not r3.partial and not r4.partial and len(r4) == 0
        ok &= linalg.same_span(r3.subspaces[0], np.eye(6, dtype=np.int64)[:3], T.field)
    ts6_time = time.perf_counter() - t0
    T = catalog("ts10", 2)
    W = np.eye(10, dtype=np.int64)[:6]
    # the closure is the set of v with W + <v> totally singular; equal to W means no 7-space contains it
    ok &= g.is_totally_singular(T, W) and forms.radical(T) == []
    ok &= linalg.same_span(g.singular_closure(T, W), W, T.field)
    report(7, "ts6 unique 3-space, no 4-space; ts10 6-space locally maximal", ok and ts6_time < 60,
           f"ts6 search {ts6_time:.2f}s")


def test_criterion_08_ratio_table():
    rows = census.table_rows(2)
    worst = max(rows, key=lambda r: r["relative_error"])
    errs = ", ".join(f"n={r['n']}: {r['relative_error']:.4f}" for r in rows)
    report(8, "q^C(n,3)/|GL(n,2)| within 2% of the quoted table", all(r["relative_error"] <= 0.02 for r in rows),
           f"worst n={worst['n']} exact {worst['float']:.6g} vs {worst['reference']}; {errs}")


def test_criterion_09_oracle():
    bad, cases = [], 0
    for q in (2, 3):
        F = GF(q)
        nonsq = next((m for m in range(1, q) if not is_square(F(m))), 1)
        for name in forms.CATALOG_NAMES:
            mu = nonsq if name == "spread_odd" else (1 if name == "spread_even_heven" else None)
            T = catalog(name, q, mu, strict=False)
            if T.n > 7:
                continue
            cases += 1
            if g.singular_lines(T) != g.singular_lines_bruteforce(T):
                bad.append((name, q))
    report(9, "per-point singular lines equal the all-lines filter", not bad and cases > 0, f"{cases} forms")


def test_criterion_10_orbits():
    ok, detail = True, []
    for n, samples in ((5, None), (6, 8)):
        t0 = time.perf_counter()
        P = census.orbit_partition(n, 2)
        chk = census.check_orbits(P, samples_per_orbit=samples)
        sizes = [o.size for o in P.orbits]
        G = census.gl_order(n, 2)
        ok &= sum(sizes) == 2 ** comb(n, 3) and all(G % s == 0 for s in sizes) and chk.ok
        ok &= len(P) == census.burnside_orbit_count(n, 2)
        dt = time.perf_counter() - t0
        ok &= dt < 300
        detail.append(f"(n={n}) {len(P)} orbits, {chk.fingerprints_checked} fingerprints, {dt:.0f}s")
    report(10, "GL orbits: sizes sum and divide |GL|, fingerprints constant", ok, "; ".join(detail))


def test_criterion_11_crossalg():
    rep = crossalg.verify(samples=10_000, seed=0)
    failed = [c.name for c in rep.checks if not c.passed]
    report(11, "cross product table, identities, norm multiplicativity, no zero divisors", rep.all_passed,
           f"failed {failed}" if failed else f"{len(rep.checks)} checks")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
