"""The su(N) spanning generators lambda_i, their exponentials, and SU(N) elements.

Indexing follows i = j**2 - 1 + k with j = 1..N-1, k = 1..2j for the
off-diagonal generators and i = (j+1)**2 - 1 for the diagonal ones, so that
i runs over 1..N**2-1.  Rows and columns are 1-based in the formulas below
and 0-based in the arrays.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

UNITARITY_TOL = 1e-12
MAX_DIMENSION = 12


class GroupElementError(ValueError):
    """The matrix is not special unitary within tolerance."""


def _read_only(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


class GroupElement:
    """An element of SU(n), validated on construction."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol: float = UNITARITY_TOL):
        m = _read_only(matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise GroupElementError(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise GroupElementError("matrix has non-finite entries")
        unit_err, det_err = su_defects(m)
        if unit_err > tol or det_err > tol:
            raise GroupElementError(
                f"not in SU({m.shape[0]}): |U^H U - I|_inf = {unit_err:.3g}, |det - 1| = {det_err:.3g}")
        self.matrix = m

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix)

    def __repr__(self):
        return f"GroupElement(n={self.n})"


def su_defects(m: np.ndarray) -> tuple[float, float]:
    """Max-abs entry of ``m^H m - I`` and ``|det m - 1|``; broadcasts over a
    leading batch axis (then returns the worst case)."""
    m = np.asarray(m)
    n = m.shape[-1]
    gram = np.conj(np.swapaxes(m, -1, -2)) @ m
    unit_err = float(np.max(np.abs(gram - np.eye(n))))
    det_err = float(np.max(np.abs(np.linalg.det(m) - 1.0)))
    return unit_err, det_err


def decompose_index(i: int) -> tuple[int, int | None]:
    """Return ``(j, k)`` with ``i = j**2 - 1 + k``, or ``(j, None)`` when
    ``i = (j+1)**2 - 1`` is a diagonal generator."""
    if i < 1:
        raise IndexError(f"generator index must be >= 1, got {i}")
    j = math.isqrt(i)
    if i == (j + 1) ** 2 - 1:
        return j, None
    return j, i - j * j + 1


def _check_index(n: int, i: int) -> tuple[int, int | None]:
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    if not 1 <= i <= n * n - 1:
        raise IndexError(f"generator index {i} out of range 1..{n * n - 1} for n={n}")
    return decompose_index(i)


@lru_cache(maxsize=None)
def _generator_cached(n: int, i: int) -> np.ndarray:
    j, k = _check_index(n, i)
    g = np.zeros((n, n), dtype=complex)
    if k is None:
        g[j - 1, j - 1] = 1j
        g[j, j] = -1j
    elif k % 2:
        a = (k + 1) // 2 - 1
        g[a, j] = g[j, a] = 1j
    else:
        a = k // 2 - 1
        g[a, j] = 1
        g[j, a] = -1
    g.setflags(write=False)
    return g


def generator(n: int, i: int) -> np.ndarray:
    """The generator lambda_i of su(n) as a dense (read-only) array."""
    return _generator_cached(n, i)


def all_generators(n: int) -> list[np.ndarray]:
    return [generator(n, i) for i in range(1, n * n)]


def exp_generator(n: int, i: int, t: float) -> GroupElement:
    """exp(t * lambda_i).

    Diagonal generators give phases e^{it}, e^{-it} in rows j, j+1; even-k
    generators give the real rotation [[cos t, sin t], [-sin t, cos t]] in the
    plane (k/2, j+1).  Odd-k generators go through ``mat_exp``.
    """
    j, k = _check_index(n, i)
    u = np.eye(n, dtype=complex)
    if k is None:
        u[j - 1, j - 1] = np.exp(1j * t)
        u[j, j] = np.exp(-1j * t)
    elif k % 2 == 0:
        a, b = k // 2 - 1, j
        c, s = math.cos(t), math.sin(t)
        u[a, a] = u[b, b] = c
        u[a, b] = s
        u[b, a] = -s
    else:
        u = mat_exp(t * generator(n, i))
    return GroupElement(u)


# Pade(13) coefficients and the theta_13 threshold (Higham 2005).
_PADE13 = (64764752532480000., 32382376266240000., 7771770303897600.,
           1187353796428800., 129060195264000., 10559470521600.,
           670442572800., 33522128640., 1323241920., 40840800.,
           960960., 16380., 182., 1.)
_THETA13 = 5.371920351148152


def mat_exp(m) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a [13/13] Pade approximant."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("mat_exp needs a square matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("mat_exp needs finite entries")
    n = a.shape[0]
    norm1 = np.linalg.norm(a, 1)
    if norm1 == 0:
        return np.eye(n, dtype=complex)
    s = 0
    if norm1 > _THETA13:
        s = max(0, int(math.ceil(math.log2(norm1 / _THETA13))))
        a = a / 2.0 ** s
    b = _PADE13
    ident = np.eye(n, dtype=complex)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r
