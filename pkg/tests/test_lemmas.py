import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from checks import dirichlet_kernel, double_primed, lemma_dixit_maji, lemma_sine_variant, lemma_squared, trig_lemmas

finite = dict(allow_nan=False, allow_infinity=False)


def test_trig_lemmas_random_points():
    assert trig_lemmas(500) < 1e-12


def test_dirichlet_kernel_random_points():
    assert dirichlet_kernel(200) < 1e-12


@given(st.floats(0.05, 8, **finite), st.floats(-1.5, 1.5, **finite), st.floats(-4, 4, **finite))
def test_cosine_variant(a, u, v):
    lhs, rhs = lemma_dixit_maji(a, u, v)
    assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))


@given(st.floats(0.05, 8, **finite), st.floats(-1.5, 1.5, **finite), st.floats(-4, 4, **finite))
def test_sine_variant(a, u, v):
    lhs, rhs = lemma_sine_variant(a, u, v)
    assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))


@given(st.floats(0.05, 8, **finite), st.floats(-1.5, 1.5, **finite))
def test_squared_variant(b, u):
    lhs, rhs = lemma_squared(b, u)
    assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))


@given(st.integers(1, 12), st.floats(0.05, 3.0, **finite), st.floats(-1.0, 1.0, **finite))
def test_sin_ratio(k, re, im):
    s = complex(re, im)
    ref = cmath.sin(k * s) / cmath.sin(s)
    got = sum(cmath.exp(1j * j * s) for j in double_primed(k))
    assert abs(got - ref) <= 1e-11 * max(1.0, abs(ref))


def test_index_set():
    assert list(double_primed(3)) == [-2, 0, 2]
    assert len(double_primed(7)) == 7


@pytest.mark.parametrize("a", [0.1, 1.3, 6.0])
def test_real_axis_limit(a):
    # at u = v = 0 the cosine variant is 2/(e^a - 1)
    lhs, rhs = lemma_dixit_maji(a, 0.0, 0.0)
    assert lhs == pytest.approx(2 / math.expm1(a), rel=1e-14)
    assert rhs == pytest.approx(lhs, rel=1e-13)
