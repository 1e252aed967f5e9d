from fractions import Fraction
from math import comb

import numpy as np
import pytest

from trisect import census, forms, linalg
from trisect.errors import InvalidParameter, TooLarge
from trisect.gf import GF


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2), (2, 4), (2, 5)])
def test_gl_order_matches_enumeration(n, q):
    assert census.gl_order(n, q) == census.brute_gl_order(n, q)


@pytest.mark.parametrize("n,q", [(3, 2), (4, 2), (3, 3), (2, 4)])
def test_generators_generate_gl(n, q):
    gens = census.gl_generators(n, q)
    assert census.generated_group_order(gens, GF(q)) == census.gl_order(n, q)


def test_orbit_ratio_exact():
    r = census.orbit_ratio(5, 2)
    assert r.value == Fraction(2**10, 9999360) == Fraction(1, 9765)
    js = r.to_json()
    assert js["numerator"] == "1" and js["denominator"] == "9765"
    with pytest.raises(InvalidParameter):
        census.orbit_ratio(2, 2)


def test_ratio_table_against_references():
    rows = {r["n"]: r for r in census.table_rows(2)}
    assert set(rows) == set(range(5, 12))
    for n, r in rows.items():
        assert Fraction(int(r["numerator"]), int(r["denominator"])) == Fraction(2 ** comb(n, 3), census.gl_order(n, 2))
    for n in (7, 8, 9, 10, 11):
        assert rows[n]["relative_error"] < 0.01 and rows[n]["rounds_to_reference"]
    # the quoted n=5 value is a rounding of 1/9765, accurate to 2.4%
    assert rows[5]["rounds_to_reference"] and 0.02 < rows[5]["relative_error"] < 0.025
    assert not rows[6]["rounds_to_reference"]


def test_significant_digits():
    assert census.significant_digits("0.00010") == 2
    assert census.significant_digits("3.6e6") == 2
    assert census.significant_digits("27.6") == 3


@pytest.mark.parametrize("n,q", [(4, 2), (4, 3), (5, 2)])
def test_wedge_matrix_matches_transform(n, q, rng):
    F = GF(q)
    A = linalg.random_invertible(n, F, rng)
    W = census.wedge_matrix(A, F)
    T = forms.random_form(n, F, rng)
    coeffs = np.array([T.coeff(*t).value for t in forms.triples(n)])
    img = forms.transform(T, A)
    assert np.array_equal(linalg.matmul(W, coeffs, F), [img.coeff(*t).value for t in forms.triples(n)])


def _brute_orbits(n, q):
    """Orbits via every element of GL(n, q) (tiny cases)."""
    F = GF(q)
    m = comb(n, 3)
    states = np.arange(q**m)
    digits = np.array([(states // q**k) % q for k in range(m)])
    label = states.copy()
    for code in range(q ** (n * n)):
        A = np.array([(code // q**i) % q for i in range(n * n)]).reshape(n, n)
        if linalg.rank(A, F) != n:
            continue
        img = linalg.matmul(census.wedge_matrix(A, F), digits, F)
        img_states = (img * (q ** np.arange(m))[:, None]).sum(axis=0)
        label = np.minimum(label, label[img_states])
    # iterate to a fixed point
    changed = True
    while changed:
        new = np.minimum(label, label[label])
        changed = not np.array_equal(new, label)
        label = new
    return sorted(np.unique(label, return_counts=True)[1].tolist())


def test_orbit_partition_matches_full_group_q2_n4():
    P = census.orbit_partition(4, 2)
    assert sorted(o.size for o in P.orbits) == _brute_orbits(4, 2) == [1, 15]


def test_orbit_partition_matches_full_group_q3_n3():
    P = census.orbit_partition(3, 3)
    assert sorted(o.size for o in P.orbits) == _brute_orbits(3, 3) == [1, 2]


@pytest.mark.parametrize("n,q,sizes", [
    (4, 3, [1, 80]),
    (5, 2, [1, 155, 868]),
    (6, 2, [1, 1395, 54684, 166656, 357120, 468720]),
])
def test_orbit_partition_sizes(n, q, sizes):
    P = census.orbit_partition(n, q)
    assert sorted(o.size for o in P.orbits) == sizes
    assert len(P) == census.burnside_orbit_count(n, q)
    G = census.gl_order(n, q)
    assert all(G % s == 0 for s in sizes)


def test_orbit_queries(rng):
    F = GF(2)
    P = census.orbit_partition(5, 2)
    T = forms.random_form(5, F, rng)
    A = linalg.random_invertible(5, F, rng)
    assert P.same_orbit(T, forms.transform(T, A))
    assert not P.same_orbit(forms.parse_form("f123", F, n=5), forms.parse_form("f123+f145", F, n=5))
    js = P.to_json()
    assert js["orbit_count"] == 3 and js["orbits"][0]["form"] == "0"


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (2, 3), (3, 3), (4, 2)])
def test_conjugacy_class_sizes_sum_to_group(n, p):
    G = census.gl_order(n, p)
    classes = list(census.conjugacy_classes(n, p))
    assert sum(G // c for _, c in classes) == G
    F = GF(p)
    assert all(linalg.rank(A, F) == n for A, _ in classes)


def test_orbit_partition_size_cap():
    with pytest.raises(TooLarge):
        census.orbit_partition(7, 2)


def test_invariant_table_matches_fingerprints(rng):
    F = GF(2)
    states = rng.integers(0, 2**10, size=25)
    inv = census.invariant_table(5, 2, states)
    for s, row in zip(states, inv):
        fp = census.fingerprint(forms.TriForm.from_state(5, F, int(s)))
        assert tuple(row) == (fp.radical_dim, fp.line_count, fp.coverage_min, fp.coverage_max)


def test_check_orbits_n5():
    chk = census.check_orbits(census.orbit_partition(5, 2), samples_per_orbit=20)
    assert chk.ok and chk.orbit_count == 3 and chk.fingerprints_checked == 1 + 21 + 21
    assert chk.to_json()["ok"]


def test_fingerprints_separate_n5_orbits():
    P = census.orbit_partition(5, 2)
    fps = {census.fingerprint(forms.TriForm.from_state(5, GF(2), o.rep)) for o in P.orbits}
    assert len(fps) == 3


def test_gl_order_below_bound():
    for n in range(1, 8):
        for q in (2, 3, 4, 5):
            assert census.gl_order(n, q) < q ** (n * n)
    assert census.gl_order(2, 2) == 6 and census.gl_order(3, 2) == 168


def test_spread_forms_share_an_orbit():
    P = census.orbit_partition(6, 2)
    orbits = {P.orbit_of(forms.catalog(name, 2)) for name in ("spread_even_hodd", "t_prime", "t_double_prime")}
    assert len(orbits) == 1
    (rep,) = orbits
    assert next(o.size for o in P.orbits if o.rep == rep) == 166656


def test_fingerprint_examples(rng):
    fp = census.fingerprint(forms.catalog("ts6", 2))
    assert fp.ts_max_dim == 3 and not fp.ts_partial and fp.radical_dim == 0
    assert census.fingerprint(forms.catalog("fano7", 2)).union_kind == "HYPERPLANE"
    assert census.fingerprint(forms.catalog("fano7", 3)).union_kind == "QUADRIC"
    F = GF(3)
    T = forms.random_form(5, F, rng)
    A = linalg.random_invertible(5, F, rng)
    assert census.fingerprint(T) == census.fingerprint(forms.transform(T, A))
