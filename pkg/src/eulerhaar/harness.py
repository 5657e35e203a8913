"""Hypothesis integrals of the admissible-function conjectures for SU(N),
Sp(N) and G2, and finite-P scans that classify an admissible function.

Integration splits in two.  The torus part is exact: averaging z^m over T^l
is 1 for m = 0 and 0 otherwise, so only the z^0 coefficient of f^P survives.
The x part integrates that coefficient times the Jacobian polynomial:
box variables through exact half-integer Beta values, the Sp/G2 xi
variables exactly when no sqrt(1 - xi^2) factor survives, otherwise by
adaptive Gauss-Legendre after xi = sin(theta).

Multiplicative constants are dropped from every Jacobian.  SU values are
normalised by the integral of the Jacobian itself, so f = 1 gives 1.  Sp and
G2 values are reported unnormalised: their printed Jacobians need not have
positive mass.  Zero/nonzero verdicts are unaffected either way.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .admissible import AdmissibleFunction, ArityError, HalfSquarePolynomial, power, spectrum
from .euler_param import level_offset, n_angles, psi_slots
from .exact import ExactSum, ExactValue, QQi, half_beta
from .finite_type import FiniteTypeMonomial
from .hull import hull_contains_zero
from .oracle import QuadratureError, quadrature

NUMERIC_ZERO = 1e-9
DEFAULT_TARGET_ERR = 1e-9

HP = HalfSquarePolynomial


class MissingLimitError(ValueError):
    """G2 integration needs an explicit upper limit S(xi_1)."""


# -- G2 upper limit --------------------------------------------------------------

G2_LIMIT_PRESETS = {
    "one": HP.constant(1),
    "xi1": HP.x(1, 0),
    "sqrt1m": HP.s(1, 0),
}


def g2_limit_from_json(data: dict) -> HalfSquarePolynomial:
    """``{"preset": name}`` or ``{"coeff": [...]}`` in one variable xi_1."""
    if "preset" in data:
        try:
            return G2_LIMIT_PRESETS[data["preset"]]
        except KeyError:
            raise ValueError(f"unknown G2 limit preset {data['preset']!r}; known: {sorted(G2_LIMIT_PRESETS)}")
    return HP.from_json(1, data["coeff"])


# -- Jacobian polynomials ------------------------------------------------------------

@lru_cache(maxsize=None)
def jac_su_tilde(n: int) -> HalfSquarePolynomial:
    """prod over psi slots of x_slot^(2j-1), in n(n-1)/2 variables."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    k = n_angles(n)
    e = [0] * k
    for slot, _, j in psi_slots(n) if n >= 2 else ():
        e[slot] = 2 * j - 1
    return HP.monomial(k, tuple(e))


@lru_cache(maxsize=None)
def jac_sp_tilde(n: int, variant: str = "printed") -> HalfSquarePolynomial:
    """J_SU(n)(x block 1) * prod xi_j * prod_{j>k} pair(j, k) * J_SU(n)(x block 2)
    over N(N-1) x-variables followed by xi_1..xi_N.

    ``printed``: pair = xi_j^2 (1 - xi_k^2) - (1 - xi_j^2) xi_k, exactly as the
    formula reads; ``squared``: the symmetric variant with xi_k^2 in the second
    product.
    """
    if variant not in ("printed", "squared"):
        raise ValueError(f"unknown Sp variant {variant!r}")
    half = n_angles(n)
    k = 2 * half + n
    su = jac_su_tilde(n)
    block1 = su.embed(k, range(half))
    block2 = su.embed(k, range(half, 2 * half))
    xi = [HP.x(k, 2 * half + j) for j in range(n)]
    out = block1 * block2
    for v in xi:
        out = out * v
    for j in range(n):
        for i in range(j):
            second = xi[i] * xi[i] if variant == "squared" else xi[i]
            out = out * (xi[j] * xi[j] * (1 - xi[i] * xi[i]) - (1 - xi[j] * xi[j]) * second)
    return out


@lru_cache(maxsize=None)
def jac_g2_tilde() -> HalfSquarePolynomial:
    """The G2 Jacobian over (x1, x2, x3, x4, xi1, xi2)."""
    k = 6
    x = [HP.x(k, i) for i in range(4)]
    xi1, xi2 = HP.x(k, 4), HP.x(k, 5)
    u = 1 - xi2 * xi2
    first = xi1 * xi1 * (16 * u ** 3 + 9 * u - 24 * u ** 2) - (1 - xi1 * xi1) * (3 * xi2 - 4 * xi2 * xi2) ** 2
    second = xi1 * xi1 * (1 - xi2 * xi2) - (1 - xi1 * xi1) * xi2 * xi2
    return xi1 * xi2 * first * second * x[0] * x[1] * x[2] * x[3]


# -- spec ----------------------------------------------------------------------------

@dataclass(frozen=True)
class JacobianSpec:
    family: str
    n: Optional[int] = None
    sp_variant: str = "printed"
    g2_limit: Optional[HalfSquarePolynomial] = field(default=None, compare=False)

    def __post_init__(self):
        fam = self.family.lower()
        object.__setattr__(self, "family", fam)
        if fam in ("su", "sp"):
            if self.n is None:
                raise ValueError(f"{fam} needs n")
            if fam == "su" and self.n < 2:
                raise ValueError("SU(N) needs N >= 2")
            if fam == "sp" and self.n < 1:
                raise ValueError("Sp(N) needs N >= 1")
        elif fam == "g2":
            if self.g2_limit is not None and self.g2_limit.k != 1:
                raise ValueError("the G2 limit is a polynomial in xi_1 alone")
        else:
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def x_arity(self) -> int:
        if self.family == "su":
            return n_angles(self.n)
        if self.family == "sp":
            return self.n * self.n
        return 6

    @property
    def z_arity(self) -> int:
        if self.family == "su":
            return self.n * (self.n + 1) // 2 - 1
        if self.family == "sp":
            return self.n * (self.n + 1)
        return 8

    @property
    def xi_vars(self) -> tuple[int, ...]:
        """Positions of the xi variables (the non-box ones)."""
        if self.family == "su":
            return ()
        if self.family == "sp":
            return tuple(range(self.n * (self.n - 1), self.n * self.n))
        return (4, 5)

    def jacobian(self) -> HalfSquarePolynomial:
        if self.family == "su":
            return jac_su_tilde(self.n)
        if self.family == "sp":
            return jac_sp_tilde(self.n, self.sp_variant)
        return jac_g2_tilde()

    def check(self, f: AdmissibleFunction):
        if (f.k, f.l) != (self.x_arity, self.z_arity):
            raise ArityError(
                f"{self.family.upper()} needs an admissible function on [0,1]^{self.x_arity} x T^{self.z_arity}, "
                f"got k={f.k}, l={f.l}")
        if self.family == "g2" and self.g2_limit is None:
            raise MissingLimitError("G2 integration needs an explicit upper limit S(xi_1)")

    def to_json(self) -> dict:
        out = {"family": self.family, "n": self.n}
        if self.family == "sp":
            out["sp_variant"] = self.sp_variant
        if self.family == "g2" and self.g2_limit is not None:
            out["g2_limit"] = self.g2_limit.to_json()
        return out


# -- integral values -----------------------------------------------------------------

@dataclass(frozen=True)
class IntegralValue:
    """Either an exact ExactSum or a numeric value with error estimate."""

    exact: Optional[ExactSum] = None
    num: Optional[complex] = None
    err: Optional[float] = None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def is_zero(self) -> bool:
        if self.exact is not None:
            return self.exact.is_zero()
        return abs(self.num) < NUMERIC_ZERO

    def __complex__(self):
        return complex(self.exact) if self.exact is not None else complex(self.num)

    def to_json(self) -> dict:
        if self.exact is not None:
            return self.exact.to_json()
        out = {"num": float(self.num.real), "err": float(self.err)}
        if self.num.imag:
            out["num_im"] = float(self.num.imag)
        return out


def _ordered_simplex_monomial(exps) -> Fraction:
    """Integral of prod xi_j^a_j over 0 <= xi_1 <= ... <= xi_N <= 1."""
    out, acc = Fraction(1), 0
    for j, a in enumerate(exps, start=1):
        acc += a
        out /= acc + j
    return out


def _box_factor(e, f, box) -> ExactValue:
    value = ExactValue(1)
    for i in box:
        value = value * half_beta(e[i], f[i])
    return value


def _integrate_exact(g: HalfSquarePolynomial, spec: JacobianSpec) -> ExactSum:
    xi = spec.xi_vars
    box = [i for i in range(g.k) if i not in xi]
    total = []
    if spec.family == "su":
        for (e, f), c in g.items():
            total.append(_box_factor(e, f, box) * c)
    elif spec.family == "sp":
        for (e, f), c in g.items():
            part = _ordered_simplex_monomial([e[i] for i in xi])
            total.append(_box_factor(e, f, box) * ExactValue(c * part))
    else:
        s_poly = spec.g2_limit
        powers: dict[int, HalfSquarePolynomial] = {}
        i1, i2 = xi
        for (e, f), c in g.items():
            b = e[i2] + 1
            if b not in powers:
                powers[b] = s_poly ** b
            inner = HP.monomial(1, (e[i1],), (f[i1],)) * powers[b]
            xi_part = ExactSum(half_beta(ee[0], ff[0]) * cc for (ee, ff), cc in inner.items())
            total.extend(t * (_box_factor(e, f, box) * ExactValue(c / b)) for t in xi_part.terms)
    return ExactSum(total)


def _poly_eval(e, f, c, xs, ss):
    """Vectorised evaluation of a half-square polynomial on a subset of
    variables; ``xs``/``ss`` are per-variable values (scalars or arrays)."""
    out = 0
    for t in range(len(c)):
        term = c[t]
        for v in range(len(xs)):
            if e[t, v]:
                term = term * xs[v] ** e[t, v]
            if f[t, v]:
                term = term * ss[v]
        out = out + term
    return out


def _xi_polynomial(g: HalfSquarePolynomial, spec: JacobianSpec):
    """Collapse the box variables exactly, returning numeric arrays of the
    remaining xi-polynomial (exponents, flags, complex coefficients)."""
    xi = spec.xi_vars
    box = [i for i in range(g.k) if i not in xi]
    acc: dict = {}
    for (e, f), c in g.items():
        key = (tuple(e[i] for i in xi), tuple(f[i] for i in xi))
        acc[key] = acc.get(key, 0j) + complex(_box_factor(e, f, box) * c)
    keys = list(acc)
    e = np.array([k[0] for k in keys], dtype=int).reshape(len(keys), len(xi))
    f = np.array([k[1] for k in keys], dtype=int).reshape(len(keys), len(xi))
    return e, f, np.array([acc[k] for k in keys])


def _integrate_numeric(g: HalfSquarePolynomial, spec: JacobianSpec, target_err: float):
    if g.is_zero():
        return 0j, 0.0
    e, f, c = _xi_polynomial(g, spec)
    half_pi = math.pi / 2
    if spec.family == "sp":
        # xi_j = sin(theta_j), 0 <= theta_1 <= ... <= theta_N <= pi/2; outermost is theta_N
        nxi = len(spec.xi_vars)

        def integrand(*thetas):
            th = thetas[::-1]  # th[j] = theta_{j+1}
            xs = [np.sin(t) for t in th]
            ss = [np.cos(t) for t in th]
            jac = 1.0
            for s in ss:
                jac = jac * s
            return _poly_eval(e, f, c, xs, ss) * jac

        limits = [(0.0, half_pi)] + [(0.0, (lambda *outer: outer[-1]))] * (nxi - 1)
    else:
        s_e, s_f, s_c = spec.g2_limit.to_numeric()

        def s_of(theta1):
            return _poly_eval(s_e, s_f, s_c, [math.sin(theta1)], [math.cos(theta1)]).real

        if (f[:, 1] != 0).any():
            def upper(theta1):
                s = s_of(theta1)
                if abs(s) > 1:
                    raise ValueError(f"S(xi_1) = {s} leaves [-1, 1]; sqrt(1 - xi_2^2) is undefined")
                return math.asin(s)

            def integrand(theta1, theta2):
                xs = [math.sin(theta1), np.sin(theta2)]
                ss = [math.cos(theta1), np.cos(theta2)]
                return _poly_eval(e, f, c, xs, ss) * math.cos(theta1) * np.cos(theta2)
        else:
            upper = s_of

            def integrand(theta1, xi2):
                xs = [math.sin(theta1), xi2]
                ss = [math.cos(theta1), np.sqrt(np.clip(1 - xi2 * xi2, 0, None))]
                return _poly_eval(e, f, c, xs, ss) * math.cos(theta1)

        limits = [(0.0, half_pi), (0.0, upper)]
    res = quadrature(integrand, limits, target_err)
    return complex(res.value), res.err


def _needs_numeric(g: HalfSquarePolynomial, spec: JacobianSpec) -> bool:
    if spec.family == "sp":
        return any(g.has_sflag(i) for i in spec.xi_vars)
    if spec.family == "g2":
        return g.has_sflag(spec.xi_vars[1])
    return False


def integrate_zero_mode(g: HalfSquarePolynomial, spec: JacobianSpec, method: str = "auto",
                        target_err: float = DEFAULT_TARGET_ERR) -> IntegralValue:
    """Integral of g * Jacobian over the family's x-region (g already torus-averaged)."""
    if method not in ("auto", "exact", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    if spec.family == "su" and method == "numeric":
        raise ValueError("SU integrals are always exact")
    if spec.family == "g2" and spec.g2_limit is None:
        raise MissingLimitError("G2 integration needs an explicit upper limit S(xi_1)")
    integrand = g * spec.jacobian()
    numeric = method == "numeric" or (method == "auto" and _needs_numeric(integrand, spec))
    if numeric:
        value, err = _integrate_numeric(integrand, spec, target_err)
        return IntegralValue(num=value, err=err)
    if _needs_numeric(integrand, spec):
        raise ValueError("integrand keeps sqrt(1 - xi^2) factors; no exact path")
    value = _integrate_exact(integrand, spec)
    if spec.family == "su":
        value = value / _integrate_exact(spec.jacobian(), spec).single()
    return IntegralValue(exact=value)


def integrate_hypothesis(f: AdmissibleFunction, P: int, spec: JacobianSpec, method: str = "auto",
                         target_err: float = DEFAULT_TARGET_ERR) -> IntegralValue:
    """Integral of f^P * Jacobian over the family's region times the normalised torus."""
    if P < 1:
        raise ValueError(f"P must be >= 1, got {P}")
    spec.check(f)
    return integrate_zero_mode(power(f, P).constant_term(), spec, method, target_err)


# -- scans ---------------------------------------------------------------------------

CONSISTENT = "consistent"
HYPOTHESIS_FAILS = "hypothesis-fails"
COUNTEREXAMPLE_CANDIDATE = "counterexample-candidate"


def classify(hypothesis: bool, hull: bool) -> str:
    if not hypothesis:
        return HYPOTHESIS_FAILS
    return COUNTEREXAMPLE_CANDIDATE if hull else CONSISTENT


@dataclass(frozen=True)
class ScanReport:
    spec: JacobianSpec
    p_max: int
    values: tuple[tuple[int, IntegralValue], ...]
    hypothesis: bool
    exact: bool
    hull_contains_zero: bool
    classification: str

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "p_max": self.p_max,
            "values": [{"P": p, "value": v.to_json(), "exact": v.is_exact} for p, v in self.values],
            "hypothesis": self.hypothesis,
            "exact": self.exact,
            "hull_contains_zero": self.hull_contains_zero,
            "classification": self.classification,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["P", "exact", "q", "q_im", "pi_pow", "terms", "num", "num_im", "err",
                    "hypothesis", "hull_contains_zero", "classification"])
        for p, v in self.values:
            row = {"P": p, "exact": v.is_exact}
            if v.is_exact:
                terms = v.exact.terms
                if len(terms) <= 1:
                    t = v.exact.single()
                    row.update(q=str(t.q.re), q_im=str(t.q.im), pi_pow=str(t.pi_pow))
                else:
                    row["terms"] = " + ".join(f"({t.q.re}+{t.q.im}i)*pi^{t.pi_pow}" for t in terms)
            else:
                row.update(num=repr(v.num.real), num_im=repr(v.num.imag), err=repr(v.err))
            w.writerow([row.get("P"), row.get("exact"), row.get("q", ""), row.get("q_im", ""),
                        row.get("pi_pow", ""), row.get("terms", ""), row.get("num", ""),
                        row.get("num_im", ""), row.get("err", ""), self.hypothesis,
                        self.hull_contains_zero, self.classification])
        return buf.getvalue()


def scan(f: AdmissibleFunction, p_max: int, spec: JacobianSpec, method: str = "auto",
         target_err: float = DEFAULT_TARGET_ERR) -> ScanReport:
    """Evaluate the hypothesis integrals for P = 1..p_max and classify f.

    Powers are built incrementally (f^P = f^(P-1) f), so P values are
    processed in order.
    """
    if p_max < 1:
        raise ValueError(f"p_max must be >= 1, got {p_max}")
    spec.check(f)
    values = []
    fp = None
    for p in range(1, p_max + 1):
        fp = f if fp is None else fp * f
        values.append((p, integrate_zero_mode(fp.constant_term(), spec, method, target_err)))
    hypothesis = all(v.is_zero() for _, v in values)
    exact = all(v.is_exact for _, v in values)
    # the zero function has an empty spectrum, whose hull is empty
    hull = hull_contains_zero(spectrum(f)) if not f.is_zero() else False
    return ScanReport(spec, p_max, tuple(values), hypothesis, exact, hull, classify(hypothesis, hull))


# -- finite-type monomial -> admissible function ---------------------------------------

def su_z_layout(n: int) -> list[tuple[str, int]]:
    """Chart coordinate behind each z variable of the SU(n) admissible form:
    the level-n phis, then the SU(n-1) layout, then the level-n omega."""
    if n == 1:
        return []
    off = level_offset(n, n)
    return [("phi", off + i) for i in range(n - 1)] + _inner_layout(n, n - 1) + [("omega", n - 2)]


def _inner_layout(n: int, m: int) -> list[tuple[str, int]]:
    if m == 1:
        return []
    off = level_offset(n, m)
    return [("phi", off + i) for i in range(m - 1)] + _inner_layout(n, m - 1) + [("omega", m - 2)]


def to_admissible(f: FiniteTypeMonomial) -> AdmissibleFunction:
    """e^{ik phi} -> z^k, sin psi -> x, cos psi -> sqrt(1 - x^2) (x slots in the
    flat psi order, which is the Jacobian's variable order)."""
    k_exp, m_exp, n_exp, l_exp = f.flat()
    kx = n_angles(f.n)
    zs = []
    for kind, idx in su_z_layout(f.n):
        zs.append(int(k_exp[idx]) if kind == "phi" else int(l_exp[idx]))
    coeff = HP(kx, {(tuple(int(v) for v in m_exp), tuple(int(v) for v in n_exp)): f.c})
    return AdmissibleFunction(kx, len(zs), {tuple(zs): coeff})
