import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import hadamard

from fqlcu.walsh import fwht, log2_exact, xor_table


@given(m=st.integers(0, 7), seed=st.integers(0, 2**32 - 1))
def test_fwht_matches_sylvester_matrix(m, seed):
    n = 2**m
    a = np.random.default_rng(seed).normal(size=(3, n))
    np.testing.assert_allclose(fwht(a), a @ hadamard(n), atol=1e-12)


def test_fwht_axis_and_no_mutation():
    a = np.arange(16.0).reshape(4, 4)
    before = a.copy()
    np.testing.assert_allclose(fwht(a, axis=0), hadamard(4) @ a)
    np.testing.assert_array_equal(a, before)


def test_fwht_involution_up_to_n():
    a = np.random.default_rng(1).normal(size=32)
    np.testing.assert_allclose(fwht(fwht(a)) / 32, a, atol=1e-13)


@pytest.mark.parametrize("n", [0, 3, 6, 12])
def test_non_power_of_two_rejected(n):
    with pytest.raises(ValueError):
        log2_exact(n)
    if n:
        with pytest.raises(ValueError):
            fwht(np.zeros(n))


def test_xor_table():
    t = xor_table(8)
    assert t[5, 3] == 6 and (t == t.T).all() and (np.diag(t) == 0).all()
