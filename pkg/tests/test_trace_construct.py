import itertools

import numpy as np
import pytest

from trisect import geometry as g
from trisect import trace_construct as tc
from trisect.errors import InvalidParameter, WrongParity
from trisect.forms import catalog, triples
from trisect.gf import FieldElem, ext_pair, trace_rel

QS = [2, 3, 4, 5, 7, 8, 9]


def _direct_lift(beta, setup):
    """Coefficients read off Tr(beta det) on basis triples, no group table involved."""
    e = np.eye(6, dtype=np.int64)
    return {
        t: trace_rel(tc.tau(beta, *(setup.to_ext(e[i - 1]) for i in t)), setup.pair).value
        for t in triples(6)
    }


@pytest.mark.parametrize("q", QS)
def test_lift_matches_direct_trace(q):
    setup = tc.setup_for(q)
    E = setup.ext
    for code in (1, 2, E.order - 1):
        beta = FieldElem(E, code)
        T = tc.lift(beta, setup)
        direct = _direct_lift(beta, setup)
        assert all(T.coeff(*t).value == v for t, v in direct.items())


@pytest.mark.parametrize("q", QS)
def test_to_ext_roundtrip(q, rng):
    setup = tc.setup_for(q)
    for _ in range(20):
        x = rng.integers(0, q, size=6)
        assert np.array_equal(setup.from_ext(setup.to_ext(x)), x)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11])
def test_choose_rho_odd(q):
    pair = ext_pair(q)
    rho = tc.choose_rho_odd(q)
    assert rho ** (q - 1) == -1 and not pair.in_base(rho)
    t1, t2, t3 = tc.rho_traces(rho, pair)
    assert t1 == 0 and t3 == 0


@pytest.mark.parametrize("q", [2, 4, 8, 16])
def test_choose_rho_even(q):
    pair = ext_pair(q)
    rho = tc.choose_rho_even(q)
    t1, t2, t3 = tc.rho_traces(rho, pair)
    assert t1 == 1 and t2 == 1
    if pair.base.degree % 2:
        assert t3 == 0


def test_choose_rho_even_target():
    rho = tc.choose_rho_even(4, 2)
    assert tc.rho_traces(rho, ext_pair(4))[2].value == 2
    with pytest.raises(InvalidParameter):
        tc.choose_rho_even(4, 1)
    with pytest.raises(InvalidParameter):
        tc.choose_rho_even(8, 1)
    with pytest.raises(WrongParity):
        tc.choose_rho_even(3)
    with pytest.raises(WrongParity):
        tc.choose_rho_odd(4)


@pytest.mark.parametrize("q,mu", [(3, 2), (5, 2), (5, 3), (7, 3)])
def test_odd_lift_equals_catalog(q, mu):
    s = tc.setup_for(q, mu)
    assert tc.lift(tc.default_beta(s.pair), s) == catalog("spread_odd", q, mu)


def test_even_lift_equals_catalog():
    assert tc.lift(1, tc.setup_for(2)) == catalog("spread_even_hodd", 2)
    assert tc.lift(1, tc.setup_for(8)) == catalog("spread_even_hodd", 8)
    assert tc.lift(1, tc.setup_for(4, 2)) == catalog("spread_even_heven", 4, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_singular_lines_are_standard_spread(q):
    s = tc.setup_for(q)
    for code in (1, 2):
        T = tc.lift(FieldElem(s.ext, code), s)
        assert g.singular_lines(T) == tc.standard_spread(s)


def test_standard_spread_is_normal():
    assert g.is_normal_spread(tc.standard_spread(tc.setup_for(3)))


def test_setup_rejects_base_rho():
    pair = ext_pair(3)
    with pytest.raises(InvalidParameter):
        tc.ExtensionSetup(pair, pair.embed(pair.base(2)))
    with pytest.raises(InvalidParameter):
        tc.lift(0, tc.setup_for(3))


def test_cube_root_variant_q2():
    v = tc.rho_cube_root_variant(2)
    assert v.rho ** 3 == 1
    assert v.forms["1"] == catalog("spread_even_hodd", 2)
    # computed assignment: beta = rho^2 yields t_prime, beta = rho yields t_double_prime
    assert v.forms["rho^2"] == catalog("t_prime", 2)
    assert v.forms["rho"] == catalog("t_double_prime", 2)
    for T in v.forms.values():
        rep = g.spread_check(g.singular_lines(T))
        assert rep.is_partition and rep.line_count == 21


def test_cube_root_variant_parity():
    with pytest.raises(WrongParity):
        tc.rho_cube_root_variant(4)


def test_groups_cover_triples_once():
    ts = [t for grp in tc.GROUPS for _, t in grp]
    assert len(ts) == len(set(ts)) == 8
    assert set(ts) <= set(itertools.chain(triples(6)))
