import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trisect import forms, linalg
from trisect.errors import InvalidParameter, Mismatch, SingularMatrix, ZeroVector
from trisect.forms import TriForm, catalog, contract, evaluate, transform
from trisect.gf import GF

QS = [2, 3, 4, 5]


def random_vec(rng, n, q):
    return rng.integers(0, q, size=n)


def test_triples_count_and_order():
    ts = forms.triples(6)
    assert len(ts) == 20 and ts[0] == (1, 2, 3) and ts == sorted(ts)


def test_construction_normalises_order_and_sign():
    F = GF(5)
    T = TriForm(4, F, {(2, 1, 3): 1})
    assert T.coeff(1, 2, 3) == F(4)
    assert T.coeff(3, 2, 1) == F(1)
    assert T.coeff(1, 1, 2) == F.zero


@pytest.mark.parametrize("q", QS)
@given(seed=st.integers(0, 2**32 - 1))
def test_alternating_and_trilinear(q, seed):
    rng = np.random.default_rng(seed)
    F = GF(q)
    T = forms.random_form(5, F, rng)
    x, y, z, w = (random_vec(rng, 5, q) for _ in range(4))
    c = int(rng.integers(0, q))
    assert evaluate(T, x, x, y) == F.zero
    assert evaluate(T, x, y, z) == -evaluate(T, y, x, z)
    assert evaluate(T, x, y, z) == evaluate(T, y, z, x)
    lhs = evaluate(T, linalg.vadd(x, linalg.scale(w, c, F), F), y, z)
    assert lhs == evaluate(T, x, y, z) + F(c) * evaluate(T, w, y, z)


@pytest.mark.parametrize("q", QS)
def test_tensor_and_contraction(q, rng):
    F = GF(q)
    T = forms.random_form(5, F, rng)
    C = T.tensor
    neg = F.tables().neg
    assert np.array_equal(C, neg[C.transpose(1, 0, 2)])
    a, b, x = (random_vec(rng, 5, q) for _ in range(3))
    if not a.any():
        a[0] = 1
    B = contract(T, a)
    assert B.is_skew()
    val = linalg.matmul(linalg.asmat(b), linalg.matmul(B.entries, x, F), F)[0]
    assert F(int(val)) == evaluate(T, a, b, x)
    assert any(np.array_equal(linalg.normalize(v, F), linalg.normalize(a, F)) for v in B.kernel()) or \
        linalg.span_contains(B.kernel(), a, F)


def test_contract_zero_vector():
    with pytest.raises(ZeroVector):
        contract(catalog("fano7", 2), [0] * 7)


def test_fano_values():
    T = catalog("fano7", 3)
    e = np.eye(7, dtype=np.int64)
    assert evaluate(T, e[0], e[1], e[3]) == 1
    assert evaluate(T, e[1], e[0], e[3]) == GF(3)(2)
    K = contract(T, e[0]).kernel()
    assert K.shape[0] == 1 and np.array_equal(K[0], e[0])


def test_fano_cyclic_symmetry():
    T = catalog("fano7", 5)
    P = np.zeros((7, 7), dtype=np.int64)
    for i in range(7):
        P[(i + 1) % 7, i] = 1
    assert transform(T, P) == T


def test_radical():
    R = forms.radical(forms.parse_form("f123", 2, n=6))
    assert linalg.same_span(R, np.eye(6, dtype=np.int64)[3:], GF(2))
    assert forms.radical(catalog("ts10", 2)) == []


@pytest.mark.parametrize("q", [2, 3, 4])
def test_transform_is_right_action(q, rng):
    F = GF(q)
    T = forms.random_form(4, F, rng)
    A = linalg.random_invertible(4, F, rng)
    B = linalg.random_invertible(4, F, rng)
    assert transform(transform(T, A), B) == transform(T, linalg.matmul(A, B, F))
    assert transform(T, linalg.identity(4)) == T
    x, y, z = (random_vec(rng, 4, q) for _ in range(3))
    assert evaluate(transform(T, A), x, y, z) == evaluate(
        T, linalg.matmul(A, x, F), linalg.matmul(A, y, F), linalg.matmul(A, z, F)
    )


def test_transform_errors():
    T = catalog("fano7", 2)
    with pytest.raises(SingularMatrix):
        transform(T, np.zeros((7, 7), dtype=np.int64))
    with pytest.raises(Mismatch):
        transform(T, np.eye(3, dtype=np.int64))


@pytest.mark.parametrize("q", [2, 3, 4, 8, 9])
def test_json_state_and_text_roundtrip(q, rng):
    F = GF(q)
    T = forms.random_form(6, F, rng, density=0.5)
    assert TriForm.from_json(json.loads(T.dumps())) == T
    assert TriForm.from_state(6, F, T.state()) == T
    assert forms.parse_form(forms.format_form(T), F, n=6) == T


def test_parse_grammar():
    F = GF(4)
    T = forms.parse_form("f123 + mu*f456 - f1_2_10", F, mu=3)
    assert T.n == 10
    assert T.coeff(4, 5, 6) == F(3)
    assert forms.parse_form("2*f124", 3) == forms.parse_form("-f124", 3)
    assert forms.parse_form("[2]*f12x", 4).coeff(1, 2, 10) == F(2)


@pytest.mark.parametrize(
    "name,q,mu",
    [("spread_odd", 3, 1), ("spread_odd", 4, 1), ("spread_odd", 5, None), ("spread_even_hodd", 4, None),
     ("spread_even_heven", 8, 1), ("spread_even_heven", 4, 1), ("t_prime", 3, None), ("nosuch", 2, None)],
)
def test_catalog_preconditions(name, q, mu):
    with pytest.raises(InvalidParameter):
        catalog(name, q, mu)


def test_catalog_patterns():
    T = catalog("spread_odd", 3, 2)
    assert forms.format_form(T) == "f123-f156+f246-f345"
    assert catalog("ts6", 2).n == 6 and catalog("ts10", 2).n == 10
    assert catalog("spread_odd", 3, 1, strict=False).coeff(1, 5, 6) == 1


def test_small_examples():
    F = GF(5)
    T = forms.parse_form("f123", F, n=3)
    B = contract(T, [1, 0, 0]).entries
    expect = np.zeros((3, 3), dtype=np.int64)
    expect[1, 2], expect[2, 1] = 1, F.neg(1)
    assert np.array_equal(B, expect)
    D = linalg.identity(3)
    D[0, 0] = 3
    assert transform(T, D) == forms.parse_form("3*f123", F, n=3)
    assert linalg.same_span(forms.radical(TriForm(4, F, {})), linalg.identity(4), F)
    assert forms.radical(catalog("fano7", 2)) == []
    assert sorted(catalog("ts6", 2).coeffs) == [(1, 5, 6), (2, 4, 6), (3, 4, 5)]
