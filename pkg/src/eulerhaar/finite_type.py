"""Finite-type monomials on SU(N) in chart coordinates and their exact
normalised Haar integrals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .euler_param import EulerCoordinates, level_offset, n_angles
from .exact import ExactValue, QQi, half_beta


class NotFiniteTypeError(ValueError):
    """The monomial is not a finite-type function, so the delta formula does
    not give its Haar integral."""


def beta_half(m: int, n: int, j: int) -> ExactValue:
    """Integral of x^(m+2j-1) (1-x^2)^(n/2) over [0, 1], i.e.
    Gamma(m/2+j) Gamma(n/2+1) / (2 Gamma((m+n)/2+j+1))."""
    if m < 0 or n < 0 or j < 1:
        raise ValueError(f"need m, n >= 0 and j >= 1, got {(m, n, j)}")
    return half_beta(m + 2 * j - 1, n)


@dataclass(frozen=True)
class LevelExponents:
    """Exponents of one recursion level SU(m): e^{i k_j phi_j} sin^{m_j} cos^{nn_j}
    for j = 1..m-1, and e^{i l omega}."""

    k: tuple[int, ...]
    m: tuple[int, ...]
    nn: tuple[int, ...]
    l: int = 0

    def __post_init__(self):
        k, m, nn = tuple(map(int, self.k)), tuple(map(int, self.m)), tuple(map(int, self.nn))
        if not len(k) == len(m) == len(nn):
            raise ValueError("k, m, nn must have equal length")
        if any(v < 0 for v in m + nn):
            raise ValueError("sin/cos exponents must be nonnegative")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "nn", nn)
        object.__setattr__(self, "l", int(self.l))


@dataclass(frozen=True)
class FiniteTypeMonomial:
    """c times the recursive product over levels SU(n), SU(n-1), ..., SU(2).

    ``levels[0]`` belongs to SU(n) and has n-1 slots, ``levels[-1]`` to SU(2).
    """

    n: int
    levels: tuple[LevelExponents, ...]
    c: QQi = QQi(1)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension must be >= 2, got {self.n}")
        levels = tuple(self.levels)
        if len(levels) != self.n - 1:
            raise ValueError(f"SU({self.n}) monomial needs {self.n - 1} levels, got {len(levels)}")
        for idx, lev in enumerate(levels):
            if len(lev.k) != self.n - 1 - idx:
                raise ValueError(f"level SU({self.n - idx}) needs {self.n - 1 - idx} slots, got {len(lev.k)}")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "c", QQi.coerce(self.c))

    @classmethod
    def constant(cls, n: int, c=1) -> "FiniteTypeMonomial":
        levels = tuple(LevelExponents((0,) * (m - 1), (0,) * (m - 1), (0,) * (m - 1)) for m in range(n, 1, -1))
        return cls(n, levels, QQi.coerce(c))

    def level(self, m: int) -> LevelExponents:
        """Exponents of recursion level SU(m)."""
        return self.levels[self.n - m]

    def flat(self):
        """Exponents as flat arrays aligned with the chart layout:
        (k, m, nn) over the n(n-1)/2 slots and l over the n-1 omegas."""
        na = n_angles(self.n)
        k, m, nn = (np.zeros(na, dtype=int) for _ in range(3))
        l = np.zeros(self.n - 1, dtype=int)
        for lev_m in range(self.n, 1, -1):
            lev = self.level(lev_m)
            off = level_offset(self.n, lev_m)
            k[off:off + lev_m - 1] = lev.k
            m[off:off + lev_m - 1] = lev.m
            nn[off:off + lev_m - 1] = lev.nn
            l[lev_m - 2] = lev.l
        return k, m, nn, l

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "levels": [{"k": list(v.k), "m": list(v.m), "nn": list(v.nn), "l": v.l} for v in self.levels],
            "c": {"re": str(self.c.re), "im": str(self.c.im)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteTypeMonomial":
        c = data.get("c", {"re": "1", "im": "0"})
        return cls(
            int(data["n"]),
            tuple(LevelExponents(v["k"], v["m"], v["nn"], v.get("l", 0)) for v in data["levels"]),
            QQi(Fraction(c.get("re", "0")), Fraction(c.get("im", "0"))),
        )


def haar_integral(f: FiniteTypeMonomial) -> ExactValue:
    """Normalised Haar integral of f over SU(n).

    Zero as soon as an omega-exponent or a phi-exponent is nonzero; otherwise
    c times the product of beta_half(m_j, nn_j, j) / beta_half(0, 0, j) over
    every slot of every level.

    phi only ranges over [0, pi), so an odd phi-exponent is a function on the
    chart but not a finite-type function on the group unless some other factor
    compensates.  When every omega-exponent vanishes and no even nonzero
    phi-exponent forces the integral to zero, an odd phi-exponent would make
    the chart integral 2i/(pi k) instead of 0; such inputs raise
    NotFiniteTypeError rather than return a wrong zero.
    """
    k, m, nn, l = f.flat()
    if (l != 0).any() or ((k != 0) & (k % 2 == 0)).any():
        return ExactValue()
    if (k != 0).any():
        raise NotFiniteTypeError(
            f"odd phi-exponents {k.tolist()} with vanishing omega-exponents: not a finite-type monomial")
    value = ExactValue(f.c)
    for lev_m in range(f.n, 1, -1):
        lev = f.level(lev_m)
        for j, (mj, nj) in enumerate(zip(lev.m, lev.nn), start=1):
            value = value * (beta_half(mj, nj, j) / beta_half(0, 0, j))
    return value


def evaluate_at(f: FiniteTypeMonomial, c: EulerCoordinates) -> complex:
    if c.n != f.n:
        raise ValueError(f"monomial is on SU({f.n}) but coordinates are for SU({c.n})")
    phi, psi, omega = c.as_arrays()
    return complex(evaluate_batch(f, phi[None], psi[None], omega[None])[0])


def evaluate_batch(f: FiniteTypeMonomial, phi, psi, omega) -> np.ndarray:
    """Vectorised evaluation on coordinate arrays of shape (B, .)."""
    phi, psi, omega = (np.atleast_2d(np.asarray(v, dtype=float)) for v in (phi, psi, omega))
    if phi.shape[1] != n_angles(f.n) or omega.shape[1] != f.n - 1:
        raise ValueError(f"coordinate arrays do not match SU({f.n})")
    k, m, nn, l = f.flat()
    phase = phi @ k + omega @ l
    mag = np.prod(np.sin(psi) ** m * np.cos(psi) ** nn, axis=1)
    return complex(f.c) * mag * np.exp(1j * phase)


def random_monomial(n: int, rng: np.random.Generator, max_exp: int = 4, p_trivial_phase: float = 0.5) -> FiniteTypeMonomial:
    """Random monomial with |exponents| <= max_exp and a random Gaussian-rational
    coefficient.  With probability ``p_trivial_phase`` all phase exponents are
    zero, so the integral is a nonzero Beta product; otherwise inputs in the
    NotFiniteTypeError class are redrawn."""
    while True:
        trivial = rng.random() < p_trivial_phase
        levels = []
        for lev_m in range(n, 1, -1):
            w = lev_m - 1
            k = (0,) * w if trivial else tuple(int(v) for v in rng.integers(-max_exp, max_exp + 1, w))
            l = 0 if trivial else int(rng.integers(-max_exp, max_exp + 1))
            levels.append(LevelExponents(
                k,
                tuple(int(v) for v in rng.integers(0, max_exp + 1, w)),
                tuple(int(v) for v in rng.integers(0, max_exp + 1, w)),
                l,
            ))
        c = QQi(Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 6))),
                Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 6))))
        if not c:
            continue
        f = FiniteTypeMonomial(n, tuple(levels), c)
        try:
            haar_integral(f)
        except NotFiniteTypeError:
            continue
        return f
