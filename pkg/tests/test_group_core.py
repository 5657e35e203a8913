import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from eulerhaar.group_core import (GroupElement, GroupElementError, decompose_index, exp_generator, generator,
                                  mat_exp)


def test_su2_generators():
    assert np.array_equal(generator(2, 1), [[0, 1j], [1j, 0]])
    assert np.array_equal(generator(2, 2), [[0, 1], [-1, 0]])
    assert np.array_equal(generator(2, 3), [[1j, 0], [0, -1j]])


@pytest.mark.parametrize("n", range(2, 7))
def test_generators_anti_hermitian_traceless(n):
    for i in range(1, n * n):
        lam = generator(n, i)
        assert np.array_equal(lam.conj().T, -lam)
        assert lam.trace() == 0
        assert set(lam.ravel().tolist()) <= {0, 1, -1, 1j, -1j}


@pytest.mark.parametrize("n", range(2, 6))
def test_generators_span_su_n(n):
    basis = np.array([generator(n, i).ravel() for i in range(1, n * n)])
    stacked = np.concatenate([basis.real, basis.imag], axis=1)
    assert np.linalg.matrix_rank(stacked) == n * n - 1


def test_index_decomposition():
    assert decompose_index(1) == (1, 1)
    assert decompose_index(3) == (1, None)
    assert decompose_index(7) == (2, 4)
    assert decompose_index(8) == (2, None)


@pytest.mark.parametrize("i", [0, 9, -1])
def test_index_out_of_range(i):
    with pytest.raises(IndexError):
        generator(3, i)


def test_exp_diagonal_and_rotation():
    phi = 0.37
    assert np.allclose(exp_generator(2, 3, phi).matrix, np.diag([np.exp(1j * phi), np.exp(-1j * phi)]), atol=1e-15)
    psi = 0.81
    want = np.eye(3, dtype=complex)
    want[1:, 1:] = [[math.cos(psi), math.sin(psi)], [-math.sin(psi), math.cos(psi)]]
    assert np.allclose(exp_generator(3, 7, psi).matrix, want, atol=1e-15)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_exp_at_zero_is_identity(n):
    for i in range(1, n * n):
        assert np.array_equal(exp_generator(n, i, 0.0).matrix, np.eye(n))


def test_mat_exp_fixtures():
    assert np.array_equal(mat_exp(np.zeros((3, 3))), np.eye(3))
    assert np.allclose(mat_exp(generator(2, 2) * math.pi / 2), [[0, 1], [-1, 0]], atol=1e-15)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_closed_form_matches_mat_exp(n):
    rng = np.random.default_rng(n)
    for i in range(1, n * n):
        for t in rng.uniform(-3, 3, 4):
            assert np.max(np.abs(exp_generator(n, i, t).matrix - mat_exp(t * generator(n, i)))) <= 1e-12


def _hermitian_exp(m):
    # m anti-Hermitian: m = i h with h Hermitian
    w, v = np.linalg.eigh(-1j * m)
    return (v * np.exp(1j * w)) @ v.conj().T


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 10 ** 6), st.floats(0.01, 10))
def test_mat_exp_relative_accuracy(seed, scale):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a *= scale / np.linalg.norm(a, 2)
    ref = scipy.linalg.expm(a)
    assert np.linalg.norm(mat_exp(a) - ref) <= 1e-13 * np.linalg.norm(ref) * 10 ** (scale / 5)
    h = a - a.conj().T
    assert np.max(np.abs(mat_exp(h) - _hermitian_exp(h))) <= 1e-12


@settings(deadline=None, max_examples=60)
@given(st.integers(2, 5), st.data(), st.floats(-3, 3), st.floats(-3, 3))
def test_one_parameter_group(n, data, t, s):
    lam = generator(n, data.draw(st.integers(1, n * n - 1)))
    assert np.max(np.abs(mat_exp(t * lam) @ mat_exp(s * lam) - mat_exp((t + s) * lam))) <= 1e-11


def test_group_element_validation():
    with pytest.raises(GroupElementError):
        GroupElement(2 * np.eye(2))
    with pytest.raises(GroupElementError):
        GroupElement(np.diag([1, -1]))  # unitary, det -1
    with pytest.raises(GroupElementError):
        GroupElement(np.full((2, 2), np.nan))
    g = GroupElement(np.eye(3))
    with pytest.raises(ValueError):
        g.matrix[0, 0] = 2
