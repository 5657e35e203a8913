import math
from fractions import Fraction as F

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, settings, strategies as st

from eulerhaar.admissible import AdmissibleFunction, ArityError, HalfSquarePolynomial as HP, power
from eulerhaar.exact import ExactSum, ExactValue, QQi
from eulerhaar.finite_type import haar_integral, random_monomial
from eulerhaar.harness import (G2_LIMIT_PRESETS, JacobianSpec, MissingLimitError, classify, integrate_hypothesis,
                               integrate_zero_mode, jac_g2_tilde, jac_sp_tilde, jac_su_tilde, scan, su_z_layout,
                               to_admissible)
from eulerhaar.hull import hull_contains_zero
from eulerhaar.oracle import quadrature
from eulerhaar.verify import random_admissible

SU2 = JacobianSpec("su", 2)


def const(spec, c=1):
    return AdmissibleFunction.constant(spec.x_arity, spec.z_arity, c)


def test_su_jacobians():
    assert jac_su_tilde(2) == HP.x(1, 0)
    assert jac_su_tilde(3) == HP.monomial(3, (1, 3, 1))
    for n in range(2, 7):
        assert jac_su_tilde(n).k == n * (n - 1) // 2


def test_sp_jacobians():
    assert jac_sp_tilde(1) == HP.x(1, 0)
    x1, x2, xi1, xi2 = (HP.x(4, i) for i in range(4))
    pair = xi2 * xi2 * (1 - xi1 * xi1) - (1 - xi2 * xi2) * xi1
    assert jac_sp_tilde(2) == x1 * xi1 * xi2 * pair * x2
    assert max(sum(e) for (e, _), _ in pair.items()) == 4
    squared = xi2 * xi2 * (1 - xi1 * xi1) - (1 - xi2 * xi2) * xi1 * xi1
    assert jac_sp_tilde(2, "squared") == x1 * xi1 * xi2 * squared * x2
    assert jac_sp_tilde(3).k == 9


def test_g2_jacobian():
    j = jac_g2_tilde()
    rng = np.random.default_rng(0)
    for _ in range(5):
        p = rng.uniform(0, 1, 6)
        assert j.evaluate(np.r_[p[:5], 0.0]) == 0
        q = p.copy()
        q[int(rng.integers(4))] = 0
        assert j.evaluate(q) == 0
    assert j.evaluate([1, 1, 1, 1, 1, math.sqrt(0.5)]).real == pytest.approx(math.sqrt(0.5) / 4, rel=1e-14)


def test_spec_arities():
    assert (JacobianSpec("su", 4).x_arity, JacobianSpec("su", 4).z_arity) == (6, 9)
    assert (JacobianSpec("sp", 3).x_arity, JacobianSpec("sp", 3).z_arity) == (9, 12)
    g2 = JacobianSpec("g2")
    assert (g2.x_arity, g2.z_arity) == (6, 8)


def test_su_examples():
    z1 = AdmissibleFunction.term(1, 2, (1, 0))
    for P in range(1, 6):
        assert integrate_hypothesis(z1, P, SU2).exact == ExactSum()
        assert integrate_hypothesis(const(SU2), P, SU2).exact == ExactValue(1)
    f = AdmissibleFunction.term(1, 2, (0, 0), HP.x(1, 0) ** 2)
    v = integrate_hypothesis(f, 1, SU2)
    assert v.is_exact and v.exact == ExactValue(F(1, 2))
    num = quadrature(lambda x: x ** 3, [(0, 1)]).value / quadrature(lambda x: x, [(0, 1)]).value
    assert complex(v) == pytest.approx(num, abs=1e-10)


def test_su_never_numeric():
    with pytest.raises(ValueError):
        integrate_hypothesis(const(SU2), 1, SU2, method="numeric")


def test_errors():
    with pytest.raises(ArityError):
        integrate_hypothesis(AdmissibleFunction.constant(2, 2), 1, SU2)
    with pytest.raises(MissingLimitError):
        integrate_hypothesis(AdmissibleFunction.constant(6, 8), 1, JacobianSpec("g2"))
    with pytest.raises(ValueError):
        integrate_hypothesis(const(SU2), 0, SU2)
    with pytest.raises(ValueError):
        JacobianSpec("so", 3)


@pytest.mark.parametrize("n", [2, 3])
def test_su_path_matches_haar_integral(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        f = random_monomial(n, rng)
        v = integrate_hypothesis(to_admissible(f), 1, JacobianSpec("su", n))
        assert v.is_exact and v.exact == ExactSum([haar_integral(f)])


def test_z_layout_is_a_bijection():
    for n in range(2, 7):
        lay = su_z_layout(n)
        assert len(lay) == n * (n + 1) // 2 - 1
        assert len(set(lay)) == len(lay)


def test_ordered_simplex_exact():
    sp1 = JacobianSpec("sp", 1)
    v = integrate_hypothesis(const(sp1), 1, sp1)
    assert v.exact == ExactValue(F(1, 2))  # integral of xi over [0, 1]
    q = quadrature(lambda a, b: a * b, [(0, 1), (0, lambda a: a)], 1e-13)
    assert q.value == pytest.approx(1 / 8, abs=1e-12)


def test_numeric_path_with_square_roots():
    sp1 = JacobianSpec("sp", 1)
    f = AdmissibleFunction.term(1, 2, (0, 0), HP.s(1, 0))
    v = integrate_hypothesis(f, 1, sp1)
    assert not v.is_exact
    assert v.num.real == pytest.approx(1 / 3, abs=1e-9)  # integral of xi sqrt(1 - xi^2)


@pytest.mark.parametrize("preset", ["one", "xi1", "sqrt1m"])
def test_g2_numeric_against_scipy(preset):
    spec = JacobianSpec("g2", g2_limit=G2_LIMIT_PRESETS[preset])
    coeff = HP.s(6, 5) + HP.x(6, 4)
    f = AdmissibleFunction.term(6, 8, (0,) * 8, coeff)
    v = integrate_hypothesis(f, 1, spec)
    g = (coeff * jac_g2_tilde())
    s_of = {"one": lambda a: 1.0, "xi1": lambda a: a, "sqrt1m": lambda a: math.sqrt(1 - a * a)}[preset]
    # linear in each x_i, so fixing x_i = 1/2 reproduces the x-box integral (1/2)^4
    ref, _ = scipy.integrate.dblquad(lambda b, a: g.evaluate([0.5, 0.5, 0.5, 0.5, a, b]).real,
                                     0, 1, lambda a: 0, s_of, epsabs=1e-13, epsrel=1e-12)
    assert v.num.real == pytest.approx(ref, abs=1e-9)


def test_g2_limit_outside_unit_interval():
    spec = JacobianSpec("g2", g2_limit=HP.constant(1, 2))
    f = AdmissibleFunction.term(6, 8, (0,) * 8, HP.s(6, 5))
    with pytest.raises(ValueError):
        integrate_hypothesis(f, 1, spec)


SPECS = [JacobianSpec("sp", 1), JacobianSpec("sp", 2), JacobianSpec("sp", 2, "squared"),
         JacobianSpec("g2", g2_limit=G2_LIMIT_PRESETS["xi1"]), JacobianSpec("g2", g2_limit=G2_LIMIT_PRESETS["sqrt1m"])]


@settings(deadline=None, max_examples=15)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(SPECS))
def test_exact_and_numeric_paths_agree(seed, spec):
    box = [i for i in range(spec.x_arity) if i not in spec.xi_vars]
    g = random_admissible(np.random.default_rng(seed), spec.x_arity, 1, max_terms=2, max_deg=3,
                          sflag_vars=box, constant_prob=1.0).constant_term()
    a = integrate_zero_mode(g, spec, "exact")
    b = integrate_zero_mode(g, spec, "numeric", target_err=1e-11)
    assert abs(complex(a) - complex(b)) <= 1e-9


ALL_SPECS = [SU2, JacobianSpec("su", 3)] + SPECS


@settings(deadline=None, max_examples=30)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(ALL_SPECS), st.integers(1, 3))
def test_torus_extraction_invariance(seed, spec, P):
    rng = np.random.default_rng(seed)
    box = [i for i in range(spec.x_arity) if i not in spec.xi_vars]
    f = random_admissible(rng, spec.x_arity, spec.z_arity, max_terms=3, zrange=1, max_deg=2, sflag_vars=box)
    m = tuple(int(v) for v in rng.integers(-2, 3, spec.z_arity))
    m = m if any(m) else (1,) + m[1:]
    extra = AdmissibleFunction.term(spec.x_arity, spec.z_arity, m, HP.x(spec.x_arity, 0) + 3)
    assert integrate_hypothesis(f, P, spec).exact == integrate_hypothesis(power(f, P) + extra, 1, spec).exact


@settings(deadline=None, max_examples=30)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(ALL_SPECS), st.integers(1, 3),
       st.fractions(max_denominator=9).filter(lambda q: q != 0))
def test_scaling_covariance(seed, spec, P, c):
    rng = np.random.default_rng(seed)
    box = [i for i in range(spec.x_arity) if i not in spec.xi_vars]
    f = random_admissible(rng, spec.x_arity, spec.z_arity, max_terms=2, zrange=1, max_deg=2, sflag_vars=box,
                          constant_prob=0.8)
    lhs = integrate_hypothesis(f.scale(c), P, spec).exact
    assert lhs == integrate_hypothesis(f, P, spec).exact * ExactValue(c ** P)


def test_scan_examples():
    z = lambda m: AdmissibleFunction.term(1, 2, m)
    r = scan(z((1, 0)), 5, SU2)
    assert (r.hypothesis, r.hull_contains_zero, r.classification) == (True, False, "consistent")
    assert r.exact
    r = scan(z((1, 0)) + z((-1, 0)), 3, SU2)
    assert r.classification == "hypothesis-fails"
    assert r.values[1][1].exact == ExactValue(2)
    r = scan(AdmissibleFunction.term(1, 2, (1, 0), HP.x(1, 0)), 4, SU2)
    assert r.classification == "consistent"


def test_finite_truncation_can_flag_candidate():
    # z1 + (3x - 2)/z1: the P = 2 integral of 2(3x - 2) x vanishes, P = 4 does not
    f = AdmissibleFunction.term(1, 2, (1, 0)) + AdmissibleFunction.term(1, 2, (-1, 0), 3 * HP.x(1, 0) - 2)
    assert scan(f, 3, SU2).classification == "counterexample-candidate"
    assert scan(f, 4, SU2).classification == "hypothesis-fails"


def test_numeric_zero_is_flagged():
    sp1 = JacobianSpec("sp", 1)
    f = AdmissibleFunction.term(1, 2, (1, 0), HP.s(1, 0))
    r = scan(f, 2, sp1, method="numeric")
    assert r.hypothesis and not r.exact
    assert r.to_json()["values"][0]["exact"] is False


@settings(deadline=None, max_examples=30)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(ALL_SPECS))
def test_classification_invariant(seed, spec):
    rng = np.random.default_rng(seed)
    box = [i for i in range(spec.x_arity) if i not in spec.xi_vars]
    f = random_admissible(rng, spec.x_arity, spec.z_arity, max_terms=3, zrange=1, max_deg=1, sflag_vars=box)
    r = scan(f, 3, spec)
    assert (r.classification == "counterexample-candidate") == (r.hypothesis and r.hull_contains_zero)
    assert r.classification == classify(r.hypothesis, r.hull_contains_zero)
    assert r.hull_contains_zero == hull_contains_zero(f.terms.keys())


def test_report_serialisation():
    f = AdmissibleFunction.term(1, 2, (1, 0)) + AdmissibleFunction.term(1, 2, (-1, 0))
    r = scan(f, 2, SU2)
    j = r.to_json()
    assert {"hypothesis", "exact", "hull_contains_zero", "classification", "values"} <= j.keys()
    assert j["values"][1] == {"P": 2, "value": {"q": "2", "pi_pow": "0"}, "exact": True}
    text = r.to_csv()
    assert "\r" not in text
    lines = text.splitlines()
    assert lines[0].startswith("P,exact,q") and len(lines) == 3
