"""Recursive Euler-angle chart of SU(N), its Haar density, a Haar sampler in
chart coordinates, the chart inverse, and the constraint matrix that forces
the phi-exponents of a Haar-integrable monomial to vanish.

Flat coordinate layout for SU(n): the chart recursion visits levels
m = n, n-1, ..., 2.  Level m owns m-1 consecutive phi slots and the same psi
slots, starting at ``level_offset(n, m)``, plus ``omega[m-2]``.  Within a
level the psi slot with local index j (1-based) enters the Haar density as
2 sin^(2j-1)(psi) cos(psi); see ``psi_slots``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .group_core import GroupElement, exp_generator


class ChartBoundaryError(ValueError):
    """The group element lies on the measure-zero chart boundary."""


def n_angles(n: int) -> int:
    return n * (n - 1) // 2


def level_offset(n: int, m: int) -> int:
    """First flat phi/psi slot owned by recursion level m of SU(n)."""
    if not 2 <= m <= n:
        raise ValueError(f"level {m} outside 2..{n}")
    return n_angles(n) - n_angles(m)


@lru_cache(maxsize=None)
def psi_slots(n: int) -> tuple[tuple[int, int, int], ...]:
    """Canonical index table: ``(flat_slot, level, j)`` for every psi slot.

    The slot's Haar factor is 2 sin^(2j-1) cos, its exponent in the algebraic
    Jacobian is 2j-1.  For n=3 this is ((0, 3, 1), (1, 3, 2), (2, 2, 1)).
    """
    table = []
    for m in range(n, 1, -1):
        off = level_offset(n, m)
        table.extend((off + j - 1, m, j) for j in range(1, m))
    return tuple(table)


@dataclass(frozen=True)
class EulerCoordinates:
    """Chart coordinates (phi, psi, omega) of SU(n).

    phi in [0, pi)^(n(n-1)/2), psi in [0, pi/2]^(n(n-1)/2), omega in
    [0, 2 pi)^(n-1).
    """

    n: int
    phi: tuple[float, ...]
    psi: tuple[float, ...]
    omega: tuple[float, ...]

    def __post_init__(self):
        n = self.n
        if n < 2:
            raise ValueError(f"dimension must be >= 2, got {n}")
        phi, psi, omega = (tuple(float(v) for v in s) for s in (self.phi, self.psi, self.omega))
        if len(phi) != n_angles(n) or len(psi) != n_angles(n) or len(omega) != n - 1:
            raise ValueError(
                f"SU({n}) needs {n_angles(n)} phi, {n_angles(n)} psi and {n - 1} omega values, "
                f"got {len(phi)}, {len(psi)}, {len(omega)}")
        if not all(0.0 <= v < math.pi for v in phi):
            raise ValueError("phi values must lie in [0, pi)")
        if not all(0.0 <= v <= math.pi / 2 for v in psi):
            raise ValueError("psi values must lie in [0, pi/2]")
        if not all(0.0 <= v < 2 * math.pi for v in omega):
            raise ValueError("omega values must lie in [0, 2 pi)")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "omega", omega)

    @classmethod
    def zeros(cls, n: int) -> "EulerCoordinates":
        return cls(n, (0.0,) * n_angles(n), (0.0,) * n_angles(n), (0.0,) * (n - 1))

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return np.array(self.phi), np.array(self.psi), np.array(self.omega)

    def to_json(self) -> dict:
        return {"n": self.n, "phi": list(self.phi), "psi": list(self.psi), "omega": list(self.omega)}


# -- forward map --------------------------------------------------------------

def _a_factor(n: int, k: int, x: float, y: float) -> np.ndarray:
    # A(k)(x, y) = exp(lambda_{k^2-1} x) exp(lambda_{k^2-2} y)
    return exp_generator(n, k * k - 1, x).matrix @ exp_generator(n, k * k - 2, y).matrix


def _chart_matrix(n: int, phi, psi, omega) -> np.ndarray:
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    out = np.eye(n, dtype=complex)
    for k in range(2, n + 1):
        out = out @ _a_factor(n, k, phi[k - 2], psi[k - 2])
    inner = np.eye(n, dtype=complex)
    inner[: n - 1, : n - 1] = _chart_matrix(n - 1, phi[n - 1:], psi[n - 1:], omega[: n - 2])
    return out @ inner @ exp_generator(n, n * n - 1, omega[n - 2]).matrix


def to_group(c: EulerCoordinates) -> GroupElement:
    """F_SU(n)(phi, psi, omega) built from the closed-form generator exponentials."""
    return GroupElement(_chart_matrix(c.n, c.phi, c.psi, c.omega))


def _right_mul_a(mat: np.ndarray, k: int, x: np.ndarray, y: np.ndarray) -> None:
    """In place ``mat <- mat @ A(k)(x, y)`` over a batch; columns k-2, k-1."""
    a, b = k - 2, k - 1
    mat[:, :, a] *= np.exp(1j * x)[:, None]
    mat[:, :, b] *= np.exp(-1j * x)[:, None]
    c, s = np.cos(y)[:, None], np.sin(y)[:, None]
    col_a, col_b = mat[:, :, a].copy(), mat[:, :, b]
    mat[:, :, a] = c * col_a - s * col_b
    mat[:, :, b] = s * col_a + c * col_b


def _prod_a_batch(m: int, phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """A(2)...A(m) for a batch of level-m angles, shapes (B, m-1)."""
    out = np.broadcast_to(np.eye(m, dtype=complex), (phi.shape[0], m, m)).copy()
    for k in range(2, m + 1):
        _right_mul_a(out, k, phi[:, k - 2], psi[:, k - 2])
    return out


def to_group_batch(n: int, phi, psi, omega) -> np.ndarray:
    """Vectorised chart map: arrays (B, n(n-1)/2), (B, n(n-1)/2), (B, n-1)
    to a (B, n, n) stack of SU(n) matrices."""
    phi, psi, omega = (np.atleast_2d(np.asarray(v, dtype=float)) for v in (phi, psi, omega))
    batch = phi.shape[0]
    inner = np.ones((batch, 1, 1), dtype=complex)
    for m in range(2, n + 1):
        off = level_offset(n, m)
        outer = _prod_a_batch(m, phi[:, off:off + m - 1], psi[:, off:off + m - 1])
        padded = np.zeros((batch, m, m), dtype=complex)
        padded[:, : m - 1, : m - 1] = inner
        padded[:, m - 1, m - 1] = 1.0
        inner = outer @ padded
        w = omega[:, m - 2]
        inner[:, :, m - 2] *= np.exp(1j * w)[:, None]
        inner[:, :, m - 1] *= np.exp(-1j * w)[:, None]
    return inner


# -- Haar density and sampling ------------------------------------------------

def jacobian_weight(c: EulerCoordinates) -> float:
    """Unnormalised Haar density: prod over psi slots of 2 sin^(2j-1) cos."""
    w = 1.0
    for slot, _, j in psi_slots(c.n):
        p = c.psi[slot]
        w *= 2.0 * math.sin(p) ** (2 * j - 1) * math.cos(p)
    return w


def psi_exponents(n: int) -> np.ndarray:
    """The local index j of every flat psi slot (density sin^(2j-1) cos)."""
    js = np.empty(n_angles(n), dtype=int)
    for slot, _, j in psi_slots(n):
        js[slot] = j
    return js


def sample_haar_coords_batch(n: int, size: int, rng: np.random.Generator):
    """Draw ``size`` Haar-distributed chart coordinates as arrays (phi, psi, omega).

    psi at local index j has CDF sin^(2j) on [0, pi/2] and is drawn as
    arcsin(u^(1/(2j))).  Draws landing on psi in {0, pi/2} are redrawn.
    """
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    na = n_angles(n)
    phi = rng.uniform(0.0, math.pi, size=(size, na))
    u = rng.random((size, na))
    omega = rng.uniform(0.0, 2 * math.pi, size=(size, n - 1))
    bad = (u == 0.0) | (u == 1.0)
    while bad.any():
        u[bad] = rng.random(int(bad.sum()))
        bad = (u == 0.0) | (u == 1.0)
    psi = np.arcsin(u ** (1.0 / (2 * psi_exponents(n))))
    return phi, psi, omega


def sample_haar_coords(n: int, rng: np.random.Generator) -> EulerCoordinates:
    phi, psi, omega = sample_haar_coords_batch(n, 1, rng)
    return EulerCoordinates(n, phi[0], psi[0], omega[0])


# -- inverse chart ------------------------------------------------------------

BOUNDARY_TOL = 1e-12


def invert_batch(g, check: bool = True):
    """Chart coordinates of a (B, n, n) stack of SU(n) matrices.

    Level by level: the last column of the level-m block is
    e^{-i omega} A(2)...A(m) e_m, whose moduli fix the psi's and whose phase
    differences fix phi_1, then phi_i from phi_{i-1}; omega follows from the
    last phase.  The block is then stripped and the recursion continues.
    """
    g = np.asarray(g, dtype=complex)
    if g.ndim == 2:
        g = g[None]
    batch, n = g.shape[0], g.shape[-1]
    na = n_angles(n)
    phi = np.empty((batch, na))
    psi = np.empty((batch, na))
    omega = np.empty((batch, n - 1))
    cur = g
    for m in range(n, 1, -1):
        off = level_offset(n, m)
        v = cur[:, :, m - 1]
        mod = np.abs(v)
        if check and (mod < BOUNDARY_TOL).any():
            raise ChartBoundaryError(f"matrix lies on the chart boundary (level {m})")
        head = np.sqrt(np.cumsum(mod ** 2, axis=1))  # head[:, i] = |v_1..v_{i+1}|
        lvl_psi = np.arctan2(head[:, : m - 1], mod[:, 1:m])
        theta = np.angle(v)
        lvl_phi = np.empty((batch, m - 1))
        prev = np.zeros(batch)
        for i in range(m - 1):
            lvl_phi[:, i] = np.mod((theta[:, i] - theta[:, i + 1] + prev) / 2.0, math.pi)
            prev = lvl_phi[:, i]
        w = np.mod(-theta[:, m - 1] - lvl_phi[:, m - 2], 2 * math.pi)
        phi[:, off:off + m - 1] = lvl_phi
        psi[:, off:off + m - 1] = lvl_psi
        omega[:, m - 2] = w
        outer = _prod_a_batch(m, lvl_phi, lvl_psi)
        rest = np.conj(np.swapaxes(outer, -1, -2)) @ cur
        rest[:, :, m - 2] *= np.exp(-1j * w)[:, None]
        rest[:, :, m - 1] *= np.exp(1j * w)[:, None]
        cur = rest[:, : m - 1, : m - 1]
    # mod() can round up to the open end of the range
    phi[phi >= math.pi] -= math.pi
    omega[omega >= 2 * math.pi] -= 2 * math.pi
    return phi, psi, omega


def invert(g: GroupElement) -> EulerCoordinates:
    """Chart coordinates of ``g``; raises ChartBoundaryError off the open chart."""
    n = g.n
    m = g.matrix
    phi, psi, omega = invert_batch(m[None], check=True)
    if (psi <= 0).any() or (psi >= math.pi / 2).any():
        raise ChartBoundaryError("psi on the chart boundary")
    return EulerCoordinates(n, phi[0], psi[0], omega[0])


def invert_su2(g: GroupElement) -> EulerCoordinates:
    """(phi, psi, omega) with g = F_SU(2)(phi, psi, omega).

    g11 = e^{i(phi+omega)} cos psi and g12 = e^{i(phi-omega)} sin psi, so
    phi = (arg g11 + arg g12)/2 mod pi and omega = arg g11 - phi mod 2 pi.
    """
    if g.n != 2:
        raise ValueError("invert_su2 needs a 2x2 element")
    g11, g12 = g.matrix[0, 0], g.matrix[0, 1]
    a11 = abs(g11)
    if a11 < BOUNDARY_TOL or a11 > 1.0 - BOUNDARY_TOL:
        raise ChartBoundaryError(f"|g11| = {a11!r} is on the chart boundary")
    psi = math.atan2(abs(g12), a11)
    a, b = np.angle(g11), np.angle(g12)
    phi = math.fmod((a + b) / 2.0, math.pi) % math.pi
    if math.pi - phi <= BOUNDARY_TOL:
        # rounding just below the open end; (phi - pi, omega + pi) is the same point
        phi = 0.0
    omega = (a - phi) % (2 * math.pi)
    if omega >= 2 * math.pi:
        omega -= 2 * math.pi
    return EulerCoordinates(2, (phi,), (psi,), (omega,))


# -- constraint matrix ---------------------------------------------------------

@dataclass(frozen=True)
class ConstraintMatrix:
    """The (n-1)x(n-1) lower-Hessenberg system A k = 0 on the phi-exponents."""

    n: int
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def det(self) -> Fraction:
        return exact_det(self.entries)


def constraint_matrix(n: int) -> ConstraintMatrix:
    """Row 1 is e_1; row r >= 2 has -1/2 at column r-1, 3/4 on the diagonal
    and -1/2^(c-r+2) at columns c > r."""
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    size = n - 1
    rows = []
    for r in range(1, size + 1):
        row = [Fraction(0)] * size
        if r == 1:
            row[0] = Fraction(1)
        else:
            row[r - 2] = Fraction(-1, 2)
            row[r - 1] = Fraction(3, 4)
            for c in range(r + 1, size + 1):
                row[c - 1] = Fraction(-1, 2 ** (c - r + 2))
        rows.append(tuple(row))
    return ConstraintMatrix(n, tuple(rows))


def exact_det(rows) -> Fraction:
    """Determinant of a rational matrix: clear denominators row-wise, then
    Bareiss fraction-free elimination on the integer matrix."""
    scale = Fraction(1)
    mat = []
    for row in rows:
        den = math.lcm(*(Fraction(v).denominator for v in row))
        scale *= den
        mat.append([int(Fraction(v) * den) for v in row])
    size = len(mat)
    sign, prev = 1, 1
    for k in range(size - 1):
        if mat[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if mat[r][k] != 0), None)
            if swap is None:
                return Fraction(0)
            mat[k], mat[swap] = mat[swap], mat[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
        prev = mat[k][k]
    return Fraction(sign * mat[-1][-1], 1) / scale if size else Fraction(1)
