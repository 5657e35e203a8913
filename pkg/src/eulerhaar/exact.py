"""Exact arithmetic: Gaussian rationals, rational multiples of powers of pi,
and half-integer Gamma/Beta values.

Everything here is closed under the operations used by the integrators, so
zero tests on integrals are decidable: a finite sum ``sum_p q_p * pi**p`` with
distinct ``p`` vanishes iff every ``q_p`` does (pi is transcendental).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Rational = Union[int, Fraction]


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


@dataclass(frozen=True)
class QQi:
    """Gaussian rational ``re + i*im`` with Fraction parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "QQi":
        if isinstance(value, QQi):
            return value
        if isinstance(value, complex):
            raise TypeError("refusing inexact complex; build QQi from rationals")
        return cls(as_fraction(value), Fraction(0))

    def __add__(self, other):
        other = QQi.coerce(other)
        return QQi(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-QQi.coerce(other))

    def __rsub__(self, other):
        return QQi.coerce(other) - self

    def __mul__(self, other):
        other = QQi.coerce(other)
        return QQi(self.re * other.re - self.im * other.im,
                   self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self) -> "QQi":
        return QQi(self.re, -self.im)

    def inverse(self) -> "QQi":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise ZeroDivisionError("QQi division by zero")
        return QQi(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        return self * QQi.coerce(other).inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = QQi(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            other = QQi.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"QQi({self.re})"
        return f"QQi({self.re}, {self.im})"


I = QQi(0, 1)


class MixedTranscendenceError(ArithmeticError):
    """Raised when adding rational multiples of different powers of pi."""


@dataclass(frozen=True)
class ExactValue:
    """``q * pi**pi_pow`` with ``q`` a Gaussian rational and ``pi_pow`` a
    half-integer.  Zero is canonically ``(0, 0)``."""

    q: QQi = QQi(0)
    pi_pow: Fraction = Fraction(0)

    def __post_init__(self):
        q = QQi.coerce(self.q)
        p = as_fraction(self.pi_pow)
        if p.denominator not in (1, 2):
            raise ValueError(f"pi exponent must be a half-integer, got {p}")
        if not q:
            p = Fraction(0)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "pi_pow", p)

    @classmethod
    def coerce(cls, value) -> "ExactValue":
        if isinstance(value, ExactValue):
            return value
        return cls(QQi.coerce(value))

    def is_zero(self) -> bool:
        return not self.q

    def __add__(self, other):
        other = ExactValue.coerce(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.pi_pow != other.pi_pow:
            raise MixedTranscendenceError(
                f"cannot add multiples of pi^{self.pi_pow} and pi^{other.pi_pow}")
        return ExactValue(self.q + other.q, self.pi_pow)

    __radd__ = __add__

    def __neg__(self):
        return ExactValue(-self.q, self.pi_pow)

    def __sub__(self, other):
        return self + (-ExactValue.coerce(other))

    def __mul__(self, other):
        other = ExactValue.coerce(other)
        return ExactValue(self.q * other.q, self.pi_pow + other.pi_pow)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ExactValue.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("ExactValue division by zero")
        return ExactValue(self.q / other.q, self.pi_pow - other.pi_pow)

    def __complex__(self):
        return complex(self.q) * math.pi ** float(self.pi_pow)

    def __float__(self):
        if self.q.im:
            raise TypeError("complex ExactValue has no float value")
        return float(self.q.re) * math.pi ** float(self.pi_pow)

    def to_json(self) -> dict:
        out = {"q": str(self.q.re), "pi_pow": str(self.pi_pow)}
        if self.q.im:
            out["q_im"] = str(self.q.im)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ExactValue":
        return cls(QQi(Fraction(data["q"]), Fraction(data.get("q_im", "0"))), Fraction(data["pi_pow"]))

    def __repr__(self):
        return f"ExactValue({self.q!r}, pi^{self.pi_pow})"


class ExactSum:
    """Finite sum of ExactValues with distinct pi exponents (immutable)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[ExactValue] = ()):
        acc: dict[Fraction, QQi] = {}
        for t in terms:
            t = ExactValue.coerce(t)
            if t.is_zero():
                continue
            acc[t.pi_pow] = acc.get(t.pi_pow, QQi(0)) + t.q
        self._terms = tuple(ExactValue(q, p) for p, q in sorted(acc.items()) if q)

    @property
    def terms(self) -> tuple[ExactValue, ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def single(self) -> ExactValue:
        """The sum as one ExactValue; raises if it mixes pi powers."""
        if not self._terms:
            return ExactValue()
        if len(self._terms) > 1:
            raise MixedTranscendenceError(f"{self!r} mixes pi powers")
        return self._terms[0]

    def __add__(self, other):
        if isinstance(other, ExactSum):
            return ExactSum(self._terms + other._terms)
        return ExactSum(self._terms + (ExactValue.coerce(other),))

    __radd__ = __add__

    def __neg__(self):
        return ExactSum(-t for t in self._terms)

    def __sub__(self, other):
        if not isinstance(other, ExactSum):
            other = ExactSum([ExactValue.coerce(other)])
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ExactSum):
            other = ExactSum([ExactValue.coerce(other)])
        return ExactSum(a * b for a in self._terms for b in other._terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ExactValue.coerce(other)
        return ExactSum(t / other for t in self._terms)

    def __eq__(self, other):
        if isinstance(other, ExactValue):
            other = ExactSum([other])
        if not isinstance(other, ExactSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __complex__(self):
        return sum((complex(t) for t in self._terms), 0j)

    def to_json(self) -> dict:
        if len(self._terms) <= 1:
            return self.single().to_json()
        return {"terms": [t.to_json() for t in self._terms]}

    def __repr__(self):
        return "ExactSum(" + " + ".join(repr(t) for t in self._terms) + ")"


def gamma_half(twice_z: int) -> ExactValue:
    """Gamma(twice_z / 2) exactly, for a positive integer ``twice_z``."""
    if twice_z <= 0:
        raise ValueError("Gamma argument must be positive")
    if twice_z % 2 == 0:
        return ExactValue(math.factorial(twice_z // 2 - 1))
    # Gamma(n + 1/2) = (2n)! / (4^n n!) * sqrt(pi)
    n = (twice_z - 1) // 2
    return ExactValue(Fraction(math.factorial(2 * n), 4 ** n * math.factorial(n)), Fraction(1, 2))


def half_beta(p: int, q: int) -> ExactValue:
    """Exact value of the integral of x**p * (1 - x**2)**(q/2) over [0, 1].

    Substituting t = x**2 gives B((p+1)/2, q/2+1) / 2.
    """
    if p < 0 or q < 0:
        raise ValueError("exponents must be nonnegative")
    num = gamma_half(p + 1) * gamma_half(q + 2)
    return num / (gamma_half(p + q + 3) * 2)
