import math

import numpy as np
import pytest

from eulerhaar.group_core import GroupElement, su_defects
from eulerhaar.oracle import (MCEstimate, QuadratureError, hull_caratheodory_oracle, hull_grid_witness, hull_oracle,
                              mc_integrate, quadrature, sample_su_qr, sample_su_qr_batch)


def test_qr_sampler_is_special_unitary():
    rng = np.random.default_rng(0)
    for n in range(2, 7):
        assert isinstance(sample_su_qr(n, rng), GroupElement)
        u, d = su_defects(sample_su_qr_batch(n, 500, rng))
        assert u <= 1e-12 and d <= 1e-12


def test_constant_evaluator():
    est = mc_integrate(lambda g: np.ones(len(g)), 3, 1000, seed=0)
    assert est.mean == 1 and est.stderr == 0 and est.samples == 1000


@pytest.mark.parametrize("sampler", ["euler", "qr"])
def test_su2_entry_moment(sampler):
    est = mc_integrate(lambda g: np.abs(g[:, 0, 1]) ** 2, 2, 200000, sampler=sampler, seed=4)
    assert est.within(0.5)


def test_qr_fourth_moment_and_second_moments():
    est = mc_integrate(lambda g: np.abs(g[:, 0, 0]) ** 4, 2, 200000, sampler="qr", seed=5)
    assert est.within(1 / 3)
    n = 3
    fn = lambda g: np.stack([g[:, i, j] * np.conj(g[:, k, l]) for i, j, k, l in
                             [(0, 0, 0, 0), (1, 2, 1, 2), (0, 1, 1, 0), (2, 2, 0, 0)]], axis=1)
    est = mc_integrate(fn, n, 200000, sampler="qr", seed=6)
    assert est.within(np.array([1 / 3, 1 / 3, 0, 0])).all()


def test_stderr_definition():
    vals = np.random.default_rng(0).standard_normal(5000)
    est = mc_integrate(lambda g: vals[: len(g)], 2, 5000, seed=0, chunk=5000)
    assert est.stderr == pytest.approx(vals.std(ddof=1) / math.sqrt(5000), rel=1e-12)


def test_chunk_merge_matches_single_pass():
    vals = np.random.default_rng(1).standard_normal(10000) + 1j
    feed = iter(np.array_split(vals, 10000 // 1000))
    est = mc_integrate(lambda g: next(feed), 2, 10000, chunk=1000, seed=0)
    assert est.mean == pytest.approx(vals.mean(), rel=1e-13)
    assert est.stderr == pytest.approx(np.sqrt(np.var(vals, ddof=1) / 10000), rel=1e-12)


@pytest.mark.parametrize("sampler", ["euler", "qr"])
def test_reproducible_across_workers(sampler):
    fn = lambda g: g[:, 0, 0] * np.conj(g[:, 1, 1])
    a = mc_integrate(fn, 3, 20000, sampler=sampler, seed=9, chunk=3000)
    b = mc_integrate(fn, 3, 20000, sampler=sampler, seed=9, chunk=3000)
    c = mc_integrate(fn, 3, 20000, sampler=sampler, seed=9, chunk=3000, workers=3)
    assert a == b == c
    assert mc_integrate(fn, 3, 20000, sampler=sampler, seed=10, chunk=3000) != a


def test_mc_validation():
    with pytest.raises(ValueError):
        mc_integrate(lambda g: g[:, 0, 0], 2, 50)
    with pytest.raises(ValueError):
        mc_integrate(lambda g: g[:, 0, 0], 2, 500, sampler="bogus")


def test_within_band():
    e = MCEstimate(1.0, 0.1, 100)
    assert e.within(1.39) and not e.within(1.41)


def test_quadrature_fixtures():
    r = quadrature(lambda x: x, [(0, 1)])
    assert abs(r.value - 0.5) < 1e-12 and r.err < 1e-12
    r = quadrature(lambda x: x ** 2 * np.sqrt(np.clip(1 - x * x, 0, None)), [(0, 1)])
    assert abs(r.value - math.pi / 16) < 1e-10
    r = quadrature(lambda a, b: a * b, [(0, 1), (0, lambda a: a)])
    assert abs(r.value - 1 / 8) < 1e-12


def test_quadrature_box_and_region():
    r = quadrature(lambda a, b, c: a * b * c, [(0, 1), (0, 2), (0, 3)])
    assert r.value == pytest.approx(1 / 2 * 2 * 9 / 2, abs=1e-11)
    # quarter disc area
    r = quadrature(lambda x, y: np.ones_like(y), [(0, 1), (0, lambda x: math.sqrt(max(1 - x * x, 0)))], 1e-9)
    assert r.value == pytest.approx(math.pi / 4, abs=1e-9)


def test_quadrature_complex():
    r = quadrature(lambda t: np.exp(1j * t), [(0, math.pi)])
    assert isinstance(r.value, complex)
    assert r.value == pytest.approx(2j, abs=1e-12)


def test_quadrature_non_convergence():
    with pytest.raises(QuadratureError):
        quadrature(lambda x: np.sign(x - 1 / 3), [(0, 1)], target_err=1e-14, max_evals=2000)
    with pytest.raises(QuadratureError):
        quadrature(lambda x: 1 / np.sqrt(x), [(0, 1)], target_err=1e-12, max_evals=10 ** 5)


def test_hull_oracles():
    assert hull_grid_witness([(2, 1), (-1, -1), (0, 1)]) is not None
    assert hull_caratheodory_oracle([(2, 1), (-1, -1), (0, 1)])
    assert not hull_oracle([(1, 0), (0, 1)])
    # 0 = 40/41 * (-1) + 1/41 * 40 needs denominator 41, beyond the grid
    pts = [(40,), (-1,)]
    assert hull_grid_witness(pts) is None and hull_caratheodory_oracle(pts)


def test_moment_battery_detects_wrong_density():
    # psi drawn with CDF sin^2 at every slot (dropping the level exponents)
    from eulerhaar.euler_param import n_angles, to_group_batch
    from eulerhaar.verify import moment_battery

    n, size = 3, 200000
    rng = np.random.default_rng(0)
    phi = rng.uniform(0, math.pi, (size, n_angles(n)))
    psi = np.arcsin(np.sqrt(rng.random((size, n_angles(n)))))
    omega = rng.uniform(0, 2 * math.pi, (size, n - 1))
    g = to_group_batch(n, phi, psi, omega)
    battery = moment_battery(n)
    vals = np.stack([f(g) for _, f, _ in battery], axis=1)
    z = np.abs(vals.mean(axis=0) - [float(v) for _, _, v in battery]) / (vals.std(axis=0) / math.sqrt(size))
    assert z.max() > 10


def test_battery_values_against_qr_at_small_n():
    from eulerhaar.verify import moment_battery

    for n in (2, 3):
        battery = moment_battery(n)
        fn = lambda g: np.stack([f(g) for _, f, _ in battery], axis=1)
        est = mc_integrate(fn, n, 100000, sampler="qr", seed=n)
        assert est.within(np.array([float(v) for _, _, v in battery])).all()
