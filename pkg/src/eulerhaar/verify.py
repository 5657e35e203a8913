"""Verification batteries shared by the ``verify`` command and the acceptance
tests.  Each battery returns a SuiteResult made of named checks; sizes are
parameters so the CLI and the tests can choose their budgets."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .admissible import AdmissibleFunction, HalfSquarePolynomial, minkowski_sum, power, spectrum
from .euler_param import EulerCoordinates, constraint_matrix, invert_su2, n_angles, to_group
from .exact import QQi
from .finite_type import FiniteTypeMonomial, LevelExponents, beta_half, evaluate_batch, haar_integral, random_monomial
from .group_core import all_generators, su_defects
from .harness import (G2_LIMIT_PRESETS, JacobianSpec, classify, integrate_hypothesis, integrate_zero_mode, scan)
from .hull import check_witness, hull_witness
from .oracle import hull_oracle, mc_integrate, quadrature

SIGMAS = 4.0


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), **self.detail}


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed, **detail) -> Check:
        c = Check(name, bool(passed), detail)
        self.checks.append(c)
        return c

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def _cplx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


# -- generators and chart ---------------------------------------------------------

def suite_generators(dims=range(2, 7)) -> SuiteResult:
    res = SuiteResult("generators")
    allowed = {0, 1, -1, 1j, -1j}
    for n in dims:
        for i, lam in enumerate(all_generators(n), start=1):
            ok = (np.array_equal(lam.conj().T, -lam) and lam.trace() == 0
                  and all(complex(v) in allowed for v in lam.ravel()))
            if not ok:
                res.add(f"lambda_{i} (n={n})", False)
        res.add(f"n={n}: {n * n - 1} generators anti-Hermitian, traceless, entries in {{0, +-1, +-i}}",
                not res.failures())
    return res


def _random_coords(n: int, rng: np.random.Generator, interior: bool = False) -> EulerCoordinates:
    na = n_angles(n)
    lo = 1e-5 if interior else 0.0
    return EulerCoordinates(
        n,
        rng.uniform(0.0, math.pi, na),
        rng.uniform(lo, math.pi / 2 - lo, na),
        rng.uniform(0.0, 2 * math.pi, n - 1),
    )


def suite_parametrization(count: int = 1000, dims=(2, 3, 4, 5), seed: int = 0, tol: float = 1e-12) -> SuiteResult:
    """Chart images of uniform random coordinates are special unitary."""
    res = SuiteResult("parametrization")
    rng = np.random.default_rng(seed)
    for n in dims:
        worst_u = worst_d = 0.0
        for _ in range(count):
            g = to_group(_random_coords(n, rng)).matrix
            u, d = su_defects(g)
            worst_u, worst_d = max(worst_u, u), max(worst_d, d)
        res.add(f"SU({n}) parametrization, {count} draws", worst_u <= tol and worst_d <= tol,
                unitarity_defect=worst_u, det_defect=worst_d, tol=tol)
    return res


def suite_round_trip(count: int = 1000, seed: int = 0, tol: float = 1e-12) -> SuiteResult:
    res = SuiteResult("round-trip")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        c = _random_coords(2, rng, interior=True)
        back = invert_su2(to_group(c))
        a, b = np.concatenate(c.as_arrays()), np.concatenate(back.as_arrays())
        worst = max(worst, float(np.max(np.abs(a - b))))
    res.add(f"SU(2) round trip, {count} draws", worst <= tol, max_error=worst, tol=tol)
    return res


def suite_chart(seed: int = 0) -> SuiteResult:
    return SuiteResult("chart", suite_parametrization(seed=seed).checks + suite_round_trip(seed=seed).checks)


# -- Haar factorization: moment battery ------------------------------------------------

def moment_battery(n: int):
    """20 (name, function of a (B, n, n) stack, exact value) triples: first,
    second and fourth order entry moments of Haar measure on SU(n)."""
    a, b = n - 1, n - 2  # last and second-to-last index
    inv = Fraction(1, n)

    def pair(i, j, k, l):
        return lambda g: g[:, i, j] * np.conj(g[:, k, l])

    def val(i, j, k, l):
        return inv if (i, j) == (k, l) else Fraction(0)

    out = [
        ("E[g11]", lambda g: g[:, 0, 0], Fraction(0)),
        ("E[g12]", lambda g: g[:, 0, 1], Fraction(0)),
    ]
    seconds = [(0, 0, 0, 0), (0, 1, 0, 1), (1, 0, 1, 0), (a, a, a, a), (a, 0, a, 0),
               (0, 0, 0, 1), (0, 0, 1, 0), (0, 0, 1, 1), (0, 1, 1, 0), (0, a, a, 0),
               (1, 0, 1, 1), (a, b, a, a)]
    for i, j, k, l in seconds:
        out.append((f"E[g{i + 1}{j + 1} conj g{k + 1}{l + 1}]", pair(i, j, k, l), val(i, j, k, l)))
    a2 = lambda g, i, j: np.abs(g[:, i, j]) ** 2
    out += [
        ("E|g11|^4", lambda g: a2(g, 0, 0) ** 2, Fraction(2, n * (n + 1))),
        ("E|g11|^2|g12|^2", lambda g: a2(g, 0, 0) * a2(g, 0, 1), Fraction(1, n * (n + 1))),
        ("E|g11|^2|g21|^2", lambda g: a2(g, 0, 0) * a2(g, 1, 0), Fraction(1, n * (n + 1))),
        ("E|g11|^2|g22|^2", lambda g: a2(g, 0, 0) * a2(g, 1, 1), Fraction(1, n * n - 1)),
        ("E[g11 g22 conj(g12 g21)]",
         lambda g: g[:, 0, 0] * g[:, 1, 1] * np.conj(g[:, 0, 1] * g[:, 1, 0]), Fraction(-1, n * (n * n - 1))),
        # degree (2, 0): nonzero only through det = 1 when n = 2
        ("E[g11 g22]", lambda g: g[:, 0, 0] * g[:, 1, 1], Fraction(1, 2) if n == 2 else Fraction(0)),
    ]
    assert len(out) == 20
    return out


def suite_haar_moments(samples: int = 10 ** 6, dims=(2, 3, 4), seed: int = 0) -> SuiteResult:
    """Euler-chart sampler and QR sampler against exact moments and each other."""
    res = SuiteResult("haar-moments")
    for n in dims:
        battery = moment_battery(n)
        fn = lambda g: np.stack([f(g) for _, f, _ in battery], axis=1)
        exact = np.array([float(v) for _, _, v in battery])
        est = {s: mc_integrate(fn, n, samples, sampler=s, seed=seed + 1000 * n + i)
               for i, s in enumerate(("euler", "qr"))}
        for s in ("euler", "qr"):
            ok = est[s].within(exact, SIGMAS)
            res.add(f"SU({n}) {s} sampler vs exact moments ({samples} samples)", ok.all(),
                    failed=[battery[i][0] for i in np.flatnonzero(~ok)],
                    worst_z=float(np.max(np.abs(est[s].mean - exact) / np.maximum(est[s].stderr, 1e-300))))
        e, q = est["euler"], est["qr"]
        comb = np.sqrt(e.stderr ** 2 + q.stderr ** 2)
        ok = np.abs(e.mean - q.mean) <= SIGMAS * comb + 1e-12
        res.add(f"SU({n}) euler vs qr sampler", ok.all(),
                failed=[battery[i][0] for i in np.flatnonzero(~ok)])
    return res


# -- closed-form integrator vs Monte Carlo ----------------------------------------------

def suite_haar_integrals(samples: int = 10 ** 6, count: int = 50, dims=(2, 3), seed: int = 0) -> SuiteResult:
    """haar_integral of random monomials against Monte Carlo under both samplers
    (one shared sample set per dimension and sampler)."""
    res = SuiteResult("haar-integrals")
    rng = np.random.default_rng(seed)
    per = [count // len(dims) + (i < count % len(dims)) for i in range(len(dims))]
    for n, k in zip(dims, per):
        monos = [random_monomial(n, rng) for _ in range(k)]
        exact = np.array([complex(haar_integral(f)) for f in monos])
        fn = lambda c: np.stack([evaluate_batch(f, *c) for f in monos], axis=1)
        for i, s in enumerate(("euler", "qr")):
            est = mc_integrate(fn, n, samples, sampler=s, seed=seed + 7919 * n + i, on="coords")
            ok = est.within(exact, SIGMAS)
            res.add(f"SU({n}) {k} monomials, {s} sampler ({samples} samples)", ok.all(),
                    failed=[monos[j].to_json() for j in np.flatnonzero(~ok)])
    # fixtures: E|g12|^2 = sin^2 psi and E|g11|^4 = cos^4 psi on SU(2)
    fixtures = [
        ("E|g12|^2 = 1/2 (n=2)", FiniteTypeMonomial(2, (LevelExponents((0,), (2,), (0,)),)), Fraction(1, 2),
         lambda g: np.abs(g[:, 0, 1]) ** 2),
        ("E|g11|^4 = 1/3 (n=2)", FiniteTypeMonomial(2, (LevelExponents((0,), (0,), (4,)),)), Fraction(1, 3),
         lambda g: np.abs(g[:, 0, 0]) ** 4),
    ]
    for name, f, want, on_matrix in fixtures:
        got = haar_integral(f)
        exact_ok = got.pi_pow == 0 and got.q == QQi(want)
        est = mc_integrate(on_matrix, 2, samples, sampler="qr", seed=seed + 17)
        res.add(name, exact_ok and bool(est.within(float(want), SIGMAS)),
                exact=got.to_json(), mc_mean=_cplx(est.mean), mc_stderr=est.stderr)
    return res


# -- constraint matrix ----------------------------------------------------------------------

def suite_det(dims=range(4, 13)) -> SuiteResult:
    res = SuiteResult("detA")
    for n in dims:
        d = constraint_matrix(n).det
        want = Fraction(n, 2 ** (n - 1))
        res.add(f"det A(n={n}) = {n}/2^{n - 1}", d == want, det=str(d), expected=str(want))
    return res


# -- Beta formula -----------------------------------------------------------------------------

def suite_beta(max_m: int = 6, max_n: int = 6, max_j: int = 5, tol: float = 1e-10) -> SuiteResult:
    res = SuiteResult("beta")
    fixtures = [((0, 0, 1), Fraction(1, 2), 0), ((2, 0, 1), Fraction(1, 4), 0), ((1, 1, 1), Fraction(1, 16), 1)]
    for args, q, p in fixtures:
        v = beta_half(*args)
        res.add(f"beta_half{args} fixture", v.q == QQi(q) and v.pi_pow == p, value=v.to_json())
    worst, bad = 0.0, []
    for m in range(max_m + 1):
        for nn in range(max_n + 1):
            for j in range(1, max_j + 1):
                e = m + 2 * j - 1
                quad = quadrature(lambda x: x ** e * np.sqrt(np.clip(1 - x * x, 0, None)) ** nn,
                                  [(0.0, 1.0)], target_err=tol / 10)
                diff = abs(float(beta_half(m, nn, j)) - quad.value)
                worst = max(worst, diff)
                if diff > tol:
                    bad.append([m, nn, j])
    res.add(f"beta_half vs quadrature, m,n <= {max_n}, j <= {max_j}", not bad, max_error=worst, failed=bad, tol=tol)
    return res


# -- hull ---------------------------------------------------------------------------------------

def random_spectrum(rng: np.random.Generator, max_points: int = 6, max_dim: int = 3, radius: int = 3):
    d = int(rng.integers(1, max_dim + 1))
    k = int(rng.integers(1, max_points + 1))
    return [tuple(int(v) for v in rng.integers(-radius, radius + 1, d)) for _ in range(k)]


def suite_hull(cases: int = 200, seed: int = 0) -> SuiteResult:
    res = SuiteResult("hull")
    fixtures = [([(1,), (-1,)], True), ([(1, 0), (0, 1)], False), ([(2, 1), (-1, -1), (0, 1)], True)]
    for pts, want in fixtures:
        for method in ("caratheodory", "simplex"):
            w = hull_witness(pts, method)
            res.add(f"{pts} -> {want} ({method})", (w is not None) == want,
                    witness=[str(v) for v in w] if w else None)
    w = hull_witness([(2, 1), (-1, -1), (0, 1)])
    res.add("witness (1/4, 1/2, 1/4)", w == [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)])
    rng = np.random.default_rng(seed)
    bad = []
    for _ in range(cases):
        pts = random_spectrum(rng)
        want = hull_oracle(pts)
        for method in ("caratheodory", "simplex"):
            w = hull_witness(pts, method)
            if (w is not None) != want or (w is not None and not check_witness(pts, w)):
                bad.append({"points": pts, "method": method, "oracle": want})
    res.add(f"{cases} random spectra vs brute-force oracle", not bad, failed=bad[:10])
    return res


# -- spectrum algebra -------------------------------------------------------------------------

def random_admissible(rng: np.random.Generator, k: int, l: int, max_terms: int = 4, zrange: int = 2,
                      max_deg: int = 2, sflag_vars=None, constant_prob: float = 0.3) -> AdmissibleFunction:
    """Random admissible function; s-flags only on ``sflag_vars`` (all by default)."""
    sflag_vars = range(k) if sflag_vars is None else sflag_vars
    terms = []
    for idx in range(int(rng.integers(1, max_terms + 1))):
        if idx == 0 and rng.random() < constant_prob:
            m = (0,) * l
        else:
            m = tuple(int(v) for v in rng.integers(-zrange, zrange + 1, l))
        coeff = HalfSquarePolynomial(k)
        for _ in range(int(rng.integers(1, 3))):
            e = [0] * k
            f = [0] * k
            for _ in range(int(rng.integers(0, max_deg + 1))):
                e[int(rng.integers(k))] += 1
            for i in sflag_vars:
                if rng.random() < 0.3:
                    f[i] = 1
            c = QQi(Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))), Fraction(int(rng.integers(-2, 3)), 1))
            if c:
                coeff = coeff + HalfSquarePolynomial.monomial(k, tuple(e), tuple(f), c)
        terms.append((m, coeff))
    f = AdmissibleFunction(k, l, terms)
    return f if not f.is_zero() else AdmissibleFunction.constant(k, l)


def brute_force_power_spectrum(f: AdmissibleFunction, P: int) -> frozenset:
    """Spectrum of f^P by expanding all P-fold products of terms."""
    acc: dict = {}
    items = list(f.items())
    for combo in itertools.product(items, repeat=P):
        m = tuple(sum(v) for v in zip(*(t[0] for t in combo)))
        c = combo[0][1]
        for t in combo[1:]:
            c = c * t[1]
        acc[m] = acc[m] + c if m in acc else c
    return frozenset(m for m, c in acc.items() if not c.is_zero())


def suite_spectrum(cases: int = 50, max_p: int = 4, seed: int = 0) -> SuiteResult:
    res = SuiteResult("spectrum")
    rng = np.random.default_rng(seed)
    bad = []
    for _ in range(cases):
        k, l = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        f = random_admissible(rng, k, l, max_terms=4, zrange=2, max_deg=1)
        sp = spectrum(f)
        mink = sp
        for P in range(1, max_p + 1):
            if P > 1:
                mink = minkowski_sum(mink, sp)
            got = spectrum(power(f, P))
            if not got <= mink or got != brute_force_power_spectrum(f, P):
                bad.append({"f": f.to_json(), "P": P})
    res.add(f"Sp(f^P) within the P-fold Minkowski sum, {cases} random f, P <= {max_p}", not bad, failed=bad[:5])
    return res


# -- harness consistency ------------------------------------------------------------------------

def _harness_specs():
    return [JacobianSpec("sp", 1), JacobianSpec("sp", 2), JacobianSpec("sp", 2, "squared"),
            JacobianSpec("g2", g2_limit=G2_LIMIT_PRESETS["one"]),
            JacobianSpec("g2", g2_limit=G2_LIMIT_PRESETS["xi1"]),
            JacobianSpec("g2", g2_limit=G2_LIMIT_PRESETS["sqrt1m"])]


def suite_harness(paths: int = 20, torus: int = 100, scans: int = 30, seed: int = 0, tol: float = 1e-9) -> SuiteResult:
    res = SuiteResult("harness")
    rng = np.random.default_rng(seed)
    specs = _harness_specs()

    # exact vs numeric on integrands without sqrt(1 - xi^2) factors
    bad, worst = [], 0.0
    for idx in range(paths):
        spec = specs[idx % len(specs)]
        box = [i for i in range(spec.x_arity) if i not in spec.xi_vars]
        g = random_admissible(rng, spec.x_arity, 1, max_terms=3, zrange=1, max_deg=3,
                              sflag_vars=box, constant_prob=1.0).constant_term()
        a = integrate_zero_mode(g, spec, "exact")
        b = integrate_zero_mode(g, spec, "numeric", target_err=tol / 10)
        diff = abs(complex(a) - complex(b))
        worst = max(worst, diff)
        if diff > tol:
            bad.append({"spec": spec.to_json(), "exact": a.to_json(), "numeric": b.to_json()})
    res.add(f"Sp/G2 exact vs quadrature on {paths} integrands", not bad, max_error=worst, tol=tol, failed=bad)

    # torus extraction: adding c z^m (m != 0) to f^P leaves the integral unchanged
    bad = []
    su_specs = [JacobianSpec("su", 2), JacobianSpec("su", 3)]
    for idx in range(torus):
        spec = su_specs[idx % 2] if idx % 4 else specs[idx % len(specs)]
        f = random_admissible(rng, spec.x_arity, spec.z_arity, max_terms=3, zrange=1, max_deg=2,
                              sflag_vars=[i for i in range(spec.x_arity) if i not in spec.xi_vars])
        P = int(rng.integers(1, 4))
        m = tuple(int(v) for v in rng.integers(-2, 3, spec.z_arity))
        if not any(m):
            m = (1,) + m[1:]
        extra = AdmissibleFunction.term(spec.x_arity, spec.z_arity, m,
                                        HalfSquarePolynomial.constant(spec.x_arity, int(rng.integers(1, 9))))
        lhs = integrate_hypothesis(f, P, spec, "exact")
        rhs = integrate_hypothesis(power(f, P) + extra, 1, spec, "exact")
        if lhs.exact != rhs.exact:
            bad.append({"spec": spec.to_json(), "P": P})
    res.add(f"torus extraction invariance on {torus} random f", not bad, failed=bad[:5])

    # scan classification invariant
    bad = []
    for idx in range(scans):
        spec = su_specs[idx % 2] if idx % 3 else specs[idx % len(specs)]
        f = random_admissible(rng, spec.x_arity, spec.z_arity, max_terms=3, zrange=1, max_deg=1,
                              sflag_vars=[i for i in range(spec.x_arity) if i not in spec.xi_vars],
                              constant_prob=0.2)
        rep = scan(f, 3, spec)
        ok = (rep.classification == classify(rep.hypothesis, rep.hull_contains_zero)
              and (rep.classification == "counterexample-candidate") == (rep.hypothesis and rep.hull_contains_zero)
              and rep.hull_contains_zero == hull_oracle(sorted(spectrum(f)))
              and rep.hypothesis == all(v.is_zero() for _, v in rep.values))
        if not ok:
            bad.append(rep.to_json())
    res.add(f"ScanReport invariant on {scans} scans", not bad, failed=bad[:3])
    return res


# -- registry -------------------------------------------------------------------------------

def _haar(**kw):
    a = suite_haar_moments(**{k: v for k, v in kw.items() if k in ("samples", "seed")})
    b = suite_haar_integrals(**{k: v for k, v in kw.items() if k in ("samples", "seed")})
    return SuiteResult("haar", a.checks + b.checks)


SUITES = {
    "generators": lambda **kw: suite_generators(),
    "chart": lambda **kw: suite_chart(seed=kw.get("seed", 0)),
    "haar": _haar,
    "detA": lambda **kw: suite_det(),
    "beta": lambda **kw: suite_beta(),
    "hull": lambda **kw: suite_hull(seed=kw.get("seed", 0)),
    "spectrum": lambda **kw: suite_spectrum(seed=kw.get("seed", 0)),
    "harness": lambda **kw: suite_harness(seed=kw.get("seed", 0)),
}


def run_suite(name: str, **kw) -> list[SuiteResult]:
    """Run one named suite, or every suite for ``"all"``."""
    if name == "all":
        return [SUITES[s](**kw) for s in SUITES]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    return [SUITES[name](**kw)]
