import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trisect import linalg
from trisect.errors import SingularMatrix
from trisect.gf import GF

QS = [2, 3, 4, 5, 9]


def mats(q, rows, cols):
    return st.lists(st.integers(0, q - 1), min_size=rows * cols, max_size=rows * cols).map(
        lambda xs: np.array(xs, dtype=np.int64).reshape(rows, cols)
    )


@pytest.mark.parametrize("q", QS)
@given(data=st.data())
def test_kernel_is_annihilated_and_rank_nullity(q, data):
    F = GF(q)
    M = data.draw(mats(q, 4, 6))
    K = linalg.kernel(M, F)
    assert linalg.rank(M, F) + K.shape[0] == 6
    for v in K:
        assert not np.any(linalg.matmul(M, v, F))


@pytest.mark.parametrize("q", QS)
@given(data=st.data())
def test_rref_idempotent_and_same_span(q, data):
    F = GF(q)
    M = data.draw(mats(q, 3, 5))
    R, piv = linalg.rref(M, F)
    R2, piv2 = linalg.rref(R, F)
    assert piv == piv2 and np.array_equal(R, R2)
    if R.size:
        assert linalg.same_span(R, M, F)


@pytest.mark.parametrize("q", QS)
def test_inverse(q, rng):
    F = GF(q)
    A = linalg.random_invertible(4, F, rng)
    assert np.array_equal(linalg.matmul(A, linalg.inverse(A, F), F), linalg.identity(4))
    with pytest.raises(SingularMatrix):
        linalg.inverse(np.zeros((3, 3), dtype=np.int64), F)


def test_span_helpers():
    F = GF(3)
    B = np.array([[1, 0, 2], [0, 1, 1]])
    assert linalg.span_contains(B, [1, 1, 0], F)
    assert not linalg.span_contains(B, [0, 0, 1], F)
    assert linalg.same_span(np.zeros((0, 3)), np.zeros((1, 3)), F)
    assert np.array_equal(linalg.normalize([0, 2, 1], F), [0, 1, 2])
