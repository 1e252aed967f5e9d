import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trisect import forms, geometry as g, linalg, trace_construct as tc
from trisect.errors import NotASpread, TooLarge
from trisect.forms import catalog
from trisect.gf import GF


@pytest.mark.parametrize("n,q", [(3, 2), (4, 3), (5, 4), (3, 7)])
def test_point_enumeration_roundtrip(n, q):
    pts = list(g.enum_points(n, q))
    assert len(pts) == g.point_count(n, q) == (q**n - 1) // (q - 1)
    F = GF(q)
    for p in pts:
        assert g.point_index(p.coords, q) == p.index
        assert g.point_from_index(p.index, n, q) == p.coords
        assert p.coords[next(i for i, x in enumerate(p.coords) if x)] == 1
    V = g.points_array(n, q)
    assert np.array_equal(g.point_indices(V, q), np.arange(len(pts)))
    assert g.normalize([0, 3 % q or 1] + [0] * (n - 2), F)[1] == 1


def test_size_guard():
    with pytest.raises(TooLarge):
        g.singular_lines(forms.parse_form("f123", 7, n=12))


def test_line_key_roundtrip():
    F = GF(3)
    L = g.ProjLine.span([1, 2, 0, 1], [2, 1, 1, 0], F)
    assert g.ProjLine.from_key(L.key(3), 4, 3) == L
    pts = L.point_indices(F)
    assert len(pts) == 4
    assert all(L.contains(g.point_from_index(i, 4, 3), F) for i in pts)


def _oracle_cases():
    for q, n in [(2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6)]:
        yield q, n


@pytest.mark.parametrize("q,n", list(_oracle_cases()))
@settings(max_examples=8)
@given(seed=st.integers(0, 2**32 - 1))
def test_singular_lines_match_bruteforce(q, n, seed):
    T = forms.random_form(n, GF(q), np.random.default_rng(seed), density=0.4)
    assert g.singular_lines(T) == g.singular_lines_bruteforce(T)


@pytest.mark.parametrize("name,q,mu", [("spread_odd", 3, 2), ("spread_even_hodd", 2, None), ("fano7", 2, None),
                                       ("ts6", 2, None)])
def test_catalog_oracle(name, q, mu):
    T = catalog(name, q, mu)
    assert g.singular_lines(T) == g.singular_lines_bruteforce(T)


@pytest.mark.parametrize("q", [2, 3])
def test_equivariance(q, rng):
    F = GF(q)
    T = forms.random_form(5, F, rng)
    A = linalg.random_invertible(5, F, rng)
    assert g.singular_lines(forms.transform(T, A)).mapped(A) == g.singular_lines(T)


def test_threads_do_not_change_results(rng):
    T = forms.random_form(6, GF(3), rng)
    one = g.singular_lines(T, threads=1)
    assert g.singular_lines(T, threads=4) == one
    assert np.array_equal(g.point_kernel_dims(T, 1), g.point_kernel_dims(T, 3))


def test_lines_through_point_count_matches_lines():
    T = catalog("fano7", 3)
    L = g.singular_lines(T)
    cov = g.point_coverage(L)
    dims = g.point_kernel_dims(T)
    expect = np.array([g.lines_through_point_count(d, 3) if d >= 2 else 0 for d in dims])
    assert np.array_equal(cov, expect)


@pytest.mark.parametrize("name,q,mu", [("spread_odd", 3, 2), ("spread_odd", 5, 2), ("spread_even_hodd", 2, None),
                                       ("spread_even_heven", 4, 2)])
def test_spreads_are_normal(name, q, mu):
    L = g.singular_lines(catalog(name, q, mu))
    rep = g.spread_check(L)
    assert rep.is_partition and rep.line_count == q**4 + q**2 + 1
    assert rep.coverage_histogram == {1: rep.point_count}
    assert g.is_normal_spread(L)


def test_negative_control_not_a_spread():
    L = g.singular_lines(catalog("spread_odd", 3, 1, strict=False))
    assert not g.spread_check(L).is_partition
    with pytest.raises(NotASpread):
        g.is_normal_spread(L)


def test_empty_line_set_report():
    rep = g.spread_check(g.LineSet(6, GF(2)))
    assert rep.uncovered_points == 63 and rep.line_count == 0 and not rep.is_partition


def _regulus_swaps(S):
    """Replace three spread lines by their three transversals (a regulus switch)."""
    F = S.field
    weights = 2 ** np.arange(5, -1, -1)
    allk = np.concatenate([(R[:, 0, :] @ weights) * 64 + R[:, 1, :] @ weights for R in g.all_lines(6, 2)])
    sets = [set(r) for r in g.line_point_indices(allk, 6, F)]
    P = S.point_indices()
    keys = list(S.keys)
    for a, b, c in itertools.combinations(range(len(keys)), 3):
        A, B, C = set(P[a]), set(P[b]), set(P[c])
        tr = [i for i, s in enumerate(sets) if s & A and s & B and s & C and s not in (A, B, C)]
        if len(tr) != 3 or set().union(*(sets[i] for i in tr)) != A | B | C:
            continue
        yield g.LineSet(6, F, [k for i, k in enumerate(keys) if i not in (a, b, c)] + [int(allk[i]) for i in tr])


def test_regulus_switch_gives_non_normal_spread():
    S = tc.standard_spread(tc.setup_for(2))
    assert g.is_normal_spread(S)
    seen = 0
    for L in itertools.islice(_regulus_swaps(S), 5):
        assert g.spread_check(L).is_partition
        assert not g.is_normal_spread(L)
        assert g.normal_spread_witness(L) is not None
        seen += 1
    assert seen == 5


def test_min_coverage():
    assert g.min_coverage(catalog("spread_odd", 3, 2)) == 1
    # points off the radical see a 4-dim kernel
    assert g.min_coverage(forms.parse_form("f123", 2, n=6)) == 7
    # a generic form in odd dimension can leave points uncovered
    assert g.coverage_extremes(catalog("fano7", 3))[0] == 0
    assert g.min_coverage(forms.TriForm(4, GF(2), {})) == g.lines_through_point_count(4, 2)


@pytest.mark.parametrize("q", [2, 3])
def test_ts6_search(q):
    T = catalog("ts6", q)
    r3 = g.totally_singular_search(T, 3)
    assert len(r3) == 1 and not r3.partial
    assert linalg.same_span(r3.subspaces[0], np.eye(6, dtype=np.int64)[:3], T.field)
    assert len(g.totally_singular_search(T, 4)) == 0


def test_ts_search_matches_bruteforce_planes():
    F = GF(2)
    T = forms.random_form(5, F, np.random.default_rng(3), density=0.3)
    found = {tuple(S.ravel()) for S in g.totally_singular_search(T, 3).subspaces}
    brute = set()
    pts = g.points_array(5, 2)
    for i, j, k in itertools.combinations(range(len(pts)), 3):
        B = pts[[i, j, k]]
        if linalg.rank(B, F) == 3 and g.is_totally_singular(T, B):
            brute.add(tuple(linalg.rref(B, F)[0].ravel()))
    assert found == brute


def test_ts_budget_marks_partial():
    res = g.totally_singular_search(catalog("ts10", 2), 6, budget=10)
    assert res.partial and res.nodes == 10


def test_ts10_six_space_is_locally_maximal():
    T = catalog("ts10", 2)
    W = np.eye(10, dtype=np.int64)[:6]
    assert g.is_totally_singular(T, W)
    assert linalg.same_span(g.singular_closure(T, W), W, T.field)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_no_singular_lines_in_dimension_three(q):
    assert len(g.singular_lines(forms.parse_form("f123", q, n=3))) == 0


def test_fano_lines_lie_on_quadric():
    from trisect.hypersurface import sum_of_squares

    T = catalog("fano7", 3)
    Q = sum_of_squares(7, T.field)
    P = g.singular_lines(T).point_indices().ravel()
    assert P.size and not np.any(Q.evaluate(g.points_array(7, 3)[P]))


@pytest.mark.parametrize("n,q,count", [(3, 2, 7), (6, 2, 63), (6, 3, 364)])
def test_point_counts(n, q, count):
    assert g.point_count(n, q) == count
