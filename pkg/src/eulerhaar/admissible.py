"""Admissible functions on [0,1]^k x T^l with exact Gaussian-rational coefficients.

A coefficient c_m(x) is a polynomial in x_i and s_i = sqrt(1 - x_i^2).  It is
kept in canonical form, every s_i appearing to power 0 or 1, by rewriting
s_i^2 -> 1 - x_i^2 after each product.  With that form two polynomials are
equal iff their term maps agree, so zero-pruning is exact.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .exact import QQi

Exponents = tuple[int, ...]
Flags = tuple[int, ...]


class ArityError(ValueError):
    pass


def _parse_qqi(entry: dict) -> QQi:
    return QQi(Fraction(entry.get("re", "0")), Fraction(entry.get("im", "0")))


def _qqi_json(c: QQi) -> dict:
    return {"re": str(c.re), "im": str(c.im)}


class HalfSquarePolynomial:
    """Polynomial in x_1..x_k and s_1..s_k with s_i = sqrt(1 - x_i^2)."""

    __slots__ = ("k", "_terms")

    def __init__(self, k: int, terms: Mapping[tuple[Exponents, Flags], object] | Iterable = ()):
        self.k = int(k)
        acc: dict[tuple[Exponents, Flags], QQi] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (xexp, sflags), c in items:
            xexp, sflags = tuple(map(int, xexp)), tuple(map(int, sflags))
            if len(xexp) != self.k or len(sflags) != self.k:
                raise ArityError(f"term arity {len(xexp)}/{len(sflags)} does not match k={self.k}")
            if any(e < 0 for e in xexp) or any(s < 0 for s in sflags):
                raise ValueError("negative exponent in half-square polynomial")
            for e, c2 in _canonical_terms(xexp, sflags, QQi.coerce(c)):
                acc[e] = acc.get(e, QQi(0)) + c2
        self._terms = {e: c for e, c in acc.items() if c}

    # -- constructors --
    @classmethod
    def constant(cls, k: int, c=1) -> "HalfSquarePolynomial":
        return cls(k, {((0,) * k, (0,) * k): QQi.coerce(c)})

    @classmethod
    def monomial(cls, k: int, xexp: Exponents, sflags: Flags | None = None, c=1) -> "HalfSquarePolynomial":
        return cls(k, {(tuple(xexp), tuple(sflags) if sflags is not None else (0,) * k): QQi.coerce(c)})

    @classmethod
    def x(cls, k: int, i: int) -> "HalfSquarePolynomial":
        e = [0] * k
        e[i] = 1
        return cls.monomial(k, tuple(e))

    @classmethod
    def s(cls, k: int, i: int) -> "HalfSquarePolynomial":
        f = [0] * k
        f[i] = 1
        return cls.monomial(k, (0,) * k, tuple(f))

    # -- access --
    @property
    def terms(self) -> dict[tuple[Exponents, Flags], QQi]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, HalfSquarePolynomial):
            return NotImplemented
        return self.k == other.k and self._terms == other._terms

    def __hash__(self):
        return hash((self.k, frozenset(self._terms.items())))

    def __repr__(self):
        return f"HalfSquarePolynomial(k={self.k}, {len(self._terms)} terms)"

    # -- arithmetic --
    def _check(self, other: "HalfSquarePolynomial"):
        if self.k != other.k:
            raise ArityError(f"x-arity mismatch: {self.k} vs {other.k}")

    def __add__(self, other):
        if not isinstance(other, HalfSquarePolynomial):
            other = HalfSquarePolynomial.constant(self.k, other)
        self._check(other)
        return HalfSquarePolynomial(self.k, itertools.chain(self._terms.items(), other._terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, HalfSquarePolynomial):
            other = HalfSquarePolynomial.constant(self.k, other)
        return self + (-other)

    def __rsub__(self, other):
        return HalfSquarePolynomial.constant(self.k, other) - self

    def scale(self, c) -> "HalfSquarePolynomial":
        c = QQi.coerce(c)
        return HalfSquarePolynomial(self.k, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, HalfSquarePolynomial):
            return self.scale(other)
        self._check(other)
        out = []
        for (ea, fa), ca in self._terms.items():
            for (eb, fb), cb in other._terms.items():
                out.append(((tuple(a + b for a, b in zip(ea, eb)), tuple(a + b for a, b in zip(fa, fb))), ca * cb))
        return HalfSquarePolynomial(self.k, out)

    __rmul__ = __mul__

    def __pow__(self, p: int):
        if p < 0:
            raise ValueError("negative power")
        result, base = HalfSquarePolynomial.constant(self.k), self
        while p:
            if p & 1:
                result = result * base
            base = base * base
            p >>= 1
        return result

    # -- variable bookkeeping --
    def embed(self, k: int, positions: Iterable[int]) -> "HalfSquarePolynomial":
        """Re-index into k variables; old variable i becomes ``positions[i]``."""
        positions = list(positions)
        if len(positions) != self.k:
            raise ArityError("one target position per variable required")
        out = {}
        for (e, f), c in self._terms.items():
            ne, nf = [0] * k, [0] * k
            for i, p in enumerate(positions):
                ne[p] += e[i]
                nf[p] += f[i]
            out[(tuple(ne), tuple(nf))] = c
        return HalfSquarePolynomial(k, out)

    def has_sflag(self, i: int) -> bool:
        return any(f[i] for (_, f) in self._terms)

    def degree_in(self, i: int) -> int:
        return max((e[i] + f[i] for (e, f) in self._terms), default=0)

    def evaluate(self, x) -> complex:
        x = np.asarray(x, dtype=float)
        s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
        total = 0j
        for (e, f), c in self._terms.items():
            total += complex(c) * float(np.prod(x ** np.array(e)) * np.prod(s ** np.array(f)))
        return total

    def to_numeric(self):
        """(exponents, flags, coefficients) arrays for vectorised evaluation."""
        if not self._terms:
            return np.zeros((0, self.k), int), np.zeros((0, self.k), int), np.zeros(0, complex)
        keys = list(self._terms)
        e = np.array([k[0] for k in keys], dtype=int).reshape(len(keys), self.k)
        f = np.array([k[1] for k in keys], dtype=int).reshape(len(keys), self.k)
        c = np.array([complex(self._terms[k]) for k in keys])
        return e, f, c

    # -- JSON --
    def to_json(self) -> list[dict]:
        return [{"xexp": list(e), "sflags": list(f), **_qqi_json(c)} for (e, f), c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, k: int, data: list[dict]) -> "HalfSquarePolynomial":
        return cls(k, [((d["xexp"], d.get("sflags", [0] * k)), _parse_qqi(d)) for d in data])


def _canonical_terms(xexp: Exponents, sflags: Flags, c: QQi):
    """Rewrite s_i^(2a+b) = (1 - x_i^2)^a s_i^b and expand."""
    terms = [(list(xexp), c)]
    flags = []
    for i, s in enumerate(sflags):
        a, b = divmod(s, 2)
        flags.append(b)
        for _ in range(a):
            nxt = []
            for e, cc in terms:
                nxt.append((e, cc))
                e2 = list(e)
                e2[i] += 2
                nxt.append((e2, -cc))
            terms = nxt
    flags = tuple(flags)
    for e, cc in terms:
        yield (tuple(e), flags), cc


class AdmissibleFunction:
    """Finite sum of c_m(x) z^m over integer vectors m of length l."""

    __slots__ = ("k", "l", "_terms")

    def __init__(self, k: int, l: int, terms: Mapping[tuple[int, ...], HalfSquarePolynomial] | Iterable = ()):
        self.k, self.l = int(k), int(l)
        acc: dict[tuple[int, ...], HalfSquarePolynomial] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, poly in items:
            m = tuple(map(int, m))
            if len(m) != self.l:
                raise ArityError(f"z-exponent {m} does not have length l={self.l}")
            if poly.k != self.k:
                raise ArityError(f"coefficient x-arity {poly.k} does not match k={self.k}")
            acc[m] = acc[m] + poly if m in acc else poly
        self._terms = {m: p for m, p in acc.items() if not p.is_zero()}

    @classmethod
    def constant(cls, k: int, l: int, c=1) -> "AdmissibleFunction":
        return cls(k, l, {(0,) * l: HalfSquarePolynomial.constant(k, c)})

    @classmethod
    def term(cls, k: int, l: int, m, coeff: HalfSquarePolynomial | None = None) -> "AdmissibleFunction":
        """coeff(x) * z^m (coeff defaults to 1)."""
        if coeff is None:
            coeff = HalfSquarePolynomial.constant(k)
        return cls(k, l, {tuple(m): coeff})

    @property
    def terms(self) -> dict[tuple[int, ...], HalfSquarePolynomial]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, m) -> HalfSquarePolynomial:
        return self._terms.get(tuple(m), HalfSquarePolynomial(self.k))

    def constant_term(self) -> HalfSquarePolynomial:
        """The z^0 coefficient, i.e. the torus average."""
        return self.coefficient((0,) * self.l)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, AdmissibleFunction):
            return NotImplemented
        return (self.k, self.l) == (other.k, other.l) and self._terms == other._terms

    def __hash__(self):
        return hash((self.k, self.l, frozenset(self._terms.items())))

    def __repr__(self):
        return f"AdmissibleFunction(k={self.k}, l={self.l}, spectrum={sorted(self._terms)})"

    def _check(self, other: "AdmissibleFunction"):
        if (self.k, self.l) != (other.k, other.l):
            raise ArityError(f"arity mismatch: (k, l) = {(self.k, self.l)} vs {(other.k, other.l)}")

    def __add__(self, other):
        if not isinstance(other, AdmissibleFunction):
            other = AdmissibleFunction.constant(self.k, self.l, other)
        self._check(other)
        return AdmissibleFunction(self.k, self.l, itertools.chain(self._terms.items(), other._terms.items()))

    __radd__ = __add__

    def scale(self, c) -> "AdmissibleFunction":
        return AdmissibleFunction(self.k, self.l, {m: p.scale(c) for m, p in self._terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, AdmissibleFunction):
            return self.scale(other)
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, p: int):
        return power(self, p)

    def evaluate(self, x, z) -> complex:
        z = np.asarray(z, dtype=complex)
        return sum((p.evaluate(x) * complex(np.prod(z ** np.array(m))) for m, p in self._terms.items()), 0j)

    def to_json(self) -> dict:
        return {"k": self.k, "l": self.l,
                "terms": [{"m": list(m), "coeff": p.to_json()} for m, p in sorted(self._terms.items())]}

    @classmethod
    def from_json(cls, data: dict) -> "AdmissibleFunction":
        k, l = int(data["k"]), int(data["l"])
        return cls(k, l, [(t["m"], HalfSquarePolynomial.from_json(k, t["coeff"])) for t in data["terms"]])


def multiply(f: AdmissibleFunction, g: AdmissibleFunction) -> AdmissibleFunction:
    f._check(g)
    out = []
    for ma, pa in f.items():
        for mb, pb in g.items():
            out.append((tuple(a + b for a, b in zip(ma, mb)), pa * pb))
    return AdmissibleFunction(f.k, f.l, out)


def power(f: AdmissibleFunction, p: int) -> AdmissibleFunction:
    """f**p by repeated squaring."""
    if p < 1:
        raise ValueError(f"power must be >= 1, got {p}")
    result, base = None, f
    while p:
        if p & 1:
            result = base if result is None else multiply(result, base)
        p >>= 1
        if p:
            base = multiply(base, base)
    return result


def spectrum(f: AdmissibleFunction) -> frozenset[tuple[int, ...]]:
    """The set of z-exponents m with c_m != 0."""
    return frozenset(f._terms)


def minkowski_sum(a: Iterable[tuple[int, ...]], b: Iterable[tuple[int, ...]]) -> frozenset[tuple[int, ...]]:
    b = list(b)
    return frozenset(tuple(x + y for x, y in zip(p, q)) for p in a for q in b)
