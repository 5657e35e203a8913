import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eulerhaar.admissible import (AdmissibleFunction, ArityError, HalfSquarePolynomial as HP, minkowski_sum,
                                  multiply, power, spectrum)
from eulerhaar.exact import QQi
from eulerhaar.verify import brute_force_power_spectrum, random_admissible


def z(k, l, m, coeff=None):
    return AdmissibleFunction.term(k, l, m, coeff)


def test_s_squared_rewrites():
    s, x = HP.s(1, 0), HP.x(1, 0)
    assert s * s == 1 - x * x
    assert HP.monomial(1, (0,), (3,)) == (1 - x * x) * s


def test_multiply_fixtures():
    assert multiply(z(1, 1, (1,)), z(1, 1, (1,))) == z(1, 1, (2,))
    s = HP.s(1, 0)
    prod = multiply(z(1, 1, (1,), s), z(1, 1, (-1,), s))
    assert prod == z(1, 1, (0,), 1 - HP.x(1, 0) ** 2)


def test_arity_mismatch():
    with pytest.raises(ArityError):
        multiply(z(1, 1, (1,)), z(2, 1, (1,)))
    with pytest.raises(ArityError):
        z(1, 2, (1,))


def test_power_fixtures():
    f = z(1, 1, (1,)) + z(1, 1, (-1,))
    assert power(f, 2) == z(1, 1, (2,)) + AdmissibleFunction.constant(1, 1, 2) + z(1, 1, (-2,))
    assert power(f, 1) == f
    with pytest.raises(ValueError):
        power(f, 0)


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 2 ** 32 - 1))
def test_power_four_is_square_of_square(seed):
    f = random_admissible(np.random.default_rng(seed), 2, 2, max_terms=3, max_deg=1)
    assert power(f, 4) == multiply(power(f, 2), power(f, 2))
    assert power(f, 3) == multiply(multiply(f, f), f)


def test_zero_coefficients_pruned():
    f = z(1, 1, (1,), HP.x(1, 0)) + z(1, 1, (1,), -HP.x(1, 0))
    assert f.is_zero() and spectrum(f) == frozenset()


def test_spectrum_fixtures():
    f = z(2, 2, (2, -1), HP.constant(2, 3)) + z(2, 2, (0, 1), HP.x(2, 0))
    assert spectrum(f) == {(2, -1), (0, 1)}
    assert spectrum(AdmissibleFunction.constant(3, 2)) == {(0, 0)}


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 2 ** 32 - 1))
def test_product_spectrum_in_minkowski_sum(seed):
    rng = np.random.default_rng(seed)
    f = random_admissible(rng, 2, 2, max_terms=3, max_deg=1)
    g = random_admissible(rng, 2, 2, max_terms=3, max_deg=1)
    assert spectrum(multiply(f, g)) <= minkowski_sum(spectrum(f), spectrum(g))


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 4))
def test_power_spectrum_against_expansion(seed, P):
    f = random_admissible(np.random.default_rng(seed), 1, 2, max_terms=4, max_deg=1)
    got = spectrum(power(f, P))
    assert got == brute_force_power_spectrum(f, P)
    mink = spectrum(f)
    for _ in range(P - 1):
        mink = minkowski_sum(mink, spectrum(f))
    assert got <= mink


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 2 ** 32 - 1))
def test_product_evaluates_pointwise(seed):
    rng = np.random.default_rng(seed)
    f = random_admissible(rng, 2, 2, max_terms=3)
    g = random_admissible(rng, 2, 2, max_terms=3)
    x = rng.uniform(0, 1, 2)
    zz = np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
    assert multiply(f, g).evaluate(x, zz) == pytest.approx(f.evaluate(x, zz) * g.evaluate(x, zz), rel=1e-9, abs=1e-9)


def test_exact_coefficients():
    f = z(1, 1, (1,), HP.constant(1, QQi(F(1, 3), F(2, 7))))
    (_, c), = power(f, 3).coefficient((3,)).items()
    assert c == QQi(F(1, 3), F(2, 7)) ** 3


def test_json_round_trip():
    f = random_admissible(np.random.default_rng(1), 3, 2)
    data = f.to_json()
    assert AdmissibleFunction.from_json(data) == f
    term = data["terms"][0]["coeff"][0]
    assert term.keys() == {"xexp", "sflags", "re", "im"}


def test_embed():
    p = HP.x(2, 0) * HP.s(2, 1)
    q = p.embed(4, [3, 1])
    assert q == HP.x(4, 3) * HP.s(4, 1)
