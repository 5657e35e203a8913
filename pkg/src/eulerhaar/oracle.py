"""Independent ground truth: a QR (Ginibre) Haar sampler, seeded Monte Carlo
with standard errors, adaptive Gauss-Legendre quadrature, and a brute-force
hull oracle.  None of this uses the Euler chart or the closed-form integrals
it is meant to check."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .group_core import GroupElement


# -- QR sampler -----------------------------------------------------------------

def sample_su_qr_batch(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """(size, n, n) stack of Haar-random SU(n) matrices.

    QR of a complex Ginibre matrix with R's diagonal made positive is Haar on
    U(n); dividing by the principal n-th root of the determinant lands in
    SU(n) and keeps left-invariance, hence Haar on SU(n).
    """
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    z = (rng.standard_normal((size, n, n)) + 1j * rng.standard_normal((size, n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (d / np.abs(d))[:, None, :]
    det = np.linalg.det(q)
    return q * np.exp(-1j * np.angle(det) / n)[:, None, None]


def sample_su_qr(n: int, rng: np.random.Generator) -> GroupElement:
    return GroupElement(sample_su_qr_batch(n, 1, rng)[0])


# -- Monte Carlo ----------------------------------------------------------------

@dataclass(frozen=True)
class MCEstimate:
    """Sample mean, standard error of the mean, and sample count.  ``mean`` and
    ``stderr`` are arrays when the evaluator is vector valued."""

    mean: complex | np.ndarray
    stderr: float | np.ndarray
    samples: int

    def within(self, expected, sigmas: float = 4.0, floor: float = 1e-12):
        """|mean - expected| <= sigmas * stderr (+ a rounding floor)."""
        return np.abs(self.mean - expected) <= sigmas * self.stderr + floor


def _chunk_stats(values: np.ndarray):
    values = np.asarray(values, dtype=complex)
    mean = values.mean(axis=0)
    m2 = (np.abs(values - mean) ** 2).sum(axis=0)
    return values.shape[0], mean, m2


def _merge(a, b):
    # Chan et al. pairwise update
    na, ma, qa = a
    nb, mb, qb = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * (nb / n), qa + qb + np.abs(delta) ** 2 * (na * nb / n)


CHUNK = 1 << 16


def mc_integrate(evaluator: Callable, n: int, samples: int, sampler: str = "euler", seed: int = 0,
                 on: str = "matrix", chunk: int = CHUNK, workers: int = 1) -> MCEstimate:
    """Monte Carlo mean of ``evaluator`` under a Haar sampler on SU(n).

    ``on="matrix"`` passes a (B, n, n) stack; ``on="coords"`` passes chart
    coordinate arrays (phi, psi, omega); with the QR sampler these come from
    the chart inverse.  Samples are split into fixed chunks, each with its own
    child stream of ``SeedSequence(seed)``, and merged in chunk order, so the
    estimate is bit-identical for a given seed whatever ``workers`` is.
    """
    from .euler_param import invert_batch, sample_haar_coords_batch, to_group_batch

    if samples < 100:
        raise ValueError("mc_integrate needs at least 100 samples")
    if sampler not in ("euler", "qr"):
        raise ValueError(f"unknown sampler {sampler!r}")
    if on not in ("matrix", "coords"):
        raise ValueError(f"unknown evaluator domain {on!r}")
    sizes = [chunk] * (samples // chunk)
    if samples % chunk:
        sizes.append(samples % chunk)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(i):
        rng = np.random.default_rng(streams[i])
        size = sizes[i]
        if sampler == "euler":
            coords = sample_haar_coords_batch(n, size, rng)
            arg = to_group_batch(n, *coords) if on == "matrix" else coords
        else:
            mats = sample_su_qr_batch(n, size, rng)
            arg = mats if on == "matrix" else invert_batch(mats, check=False)
        return _chunk_stats(evaluator(arg))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            stats = list(pool.map(run, range(len(sizes))))
    else:
        stats = [run(i) for i in range(len(sizes))]
    total = stats[0]
    for s in stats[1:]:
        total = _merge(total, s)
    count, mean, m2 = total
    stderr = np.sqrt(m2 / (count - 1) / count)
    if np.ndim(mean) == 0:
        return MCEstimate(complex(mean), float(stderr), count)
    return MCEstimate(mean, stderr, count)


# -- adaptive Gauss-Legendre quadrature -----------------------------------------

class QuadratureError(RuntimeError):
    """The requested error target was not met within the evaluation budget."""


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    err: float
    evals: int


GL_ORDER = 10
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)
MAX_EVALS = 10 ** 7
MAX_DEPTH = 60

Limit = float | Callable[..., float]


class _Budget:
    def __init__(self, cap):
        self.cap, self.used = cap, 0

    def spend(self, k):
        self.used += k
        if self.used > self.cap:
            raise QuadratureError(f"evaluation cap {self.cap} exceeded")


def _gl(g, a, b, budget):
    half, mid = 0.5 * (b - a), 0.5 * (b + a)
    x = mid + half * _GL_NODES
    budget.spend(len(x))
    return half * np.dot(_GL_WEIGHTS, g(x))


def _adaptive_1d(g, a, b, tol, budget):
    """Bisect until each panel's Richardson estimate |(L + R) - whole| meets its
    share of ``tol``; return (sum of L + R, sum of estimates)."""
    if a == b:
        return 0.0, 0.0
    width = b - a
    total, err = 0.0, 0.0
    stack = [(a, b, _gl(g, a, b, budget), 0)]
    while stack:
        lo, hi, whole, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = _gl(g, lo, mid, budget), _gl(g, mid, hi, budget)
        est = abs(left + right - whole)
        local = tol * abs(hi - lo) / abs(width)
        if est <= local:
            total += left + right
            err += est
        elif depth >= MAX_DEPTH:
            raise QuadratureError(f"no convergence on [{lo}, {hi}] (estimate {est:.3g})")
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    return total, err


def quadrature(integrand: Callable, limits: Sequence[tuple[Limit, Limit]], target_err: float = 1e-10,
               max_evals: int = MAX_EVALS) -> QuadResult:
    """Nested adaptive Gauss-Legendre integral over a region given as iterated
    limits, outermost variable first.  A limit may be a number or a function of
    the outer variables (so boxes, ordered simplices and regions like
    0 <= y <= S(x) are all expressible).

    ``integrand(*outer, inner)`` receives the outer variables as floats and the
    innermost one as an array.  Raises QuadratureError if the estimate does
    not reach ``target_err`` within ``max_evals`` point evaluations.
    """
    limits = list(limits)
    if not limits:
        raise ValueError("need at least one integration variable")
    budget = _Budget(max_evals)

    def resolve(lim, outer):
        return float(lim(*outer)) if callable(lim) else float(lim)

    def level(depth, outer, tol):
        lo, hi = resolve(limits[depth][0], outer), resolve(limits[depth][1], outer)
        if depth == len(limits) - 1:
            return _adaptive_1d(lambda x: integrand(*outer, x), lo, hi, tol, budget)
        inner_tol = tol / (2.0 * max(abs(hi - lo), 1e-300))
        worst = [0.0]

        def g(xs):
            vals = []
            for x in xs:
                v, e = level(depth + 1, outer + (float(x),), inner_tol)
                worst[0] = max(worst[0], e)
                vals.append(v)
            return np.array(vals)

        v, e = _adaptive_1d(g, lo, hi, tol / 2.0, budget)
        return v, e + abs(hi - lo) * worst[0]

    value, err = level(0, (), target_err)
    if err > target_err:
        raise QuadratureError(f"error estimate {err:.3g} above target {target_err:.3g}")
    if isinstance(value, complex) or np.iscomplexobj(value):
        value = complex(value)
    else:
        value = float(value)
    return QuadResult(value, float(err), budget.used)


# -- brute-force hull oracle ------------------------------------------------------

@lru_cache(maxsize=None)
def _compositions(parts: int, max_den: int) -> tuple[np.ndarray, np.ndarray]:
    """All (a, D) with a in N^parts, sum a = D, for D = 1..max_den."""
    rows, dens = [], []
    for den in range(1, max_den + 1):
        for bars in itertools.combinations(range(den + parts - 1), parts - 1):
            rows.append(np.diff((-1,) + bars + (den + parts - 1,)) - 1)
            dens.append(den)
    return np.array(rows, dtype=np.int64).reshape(-1, parts), np.array(dens, dtype=np.int64)


def hull_grid_witness(points: Sequence[Sequence[int]], max_den: int = 20) -> list[Fraction] | None:
    """Search convex weights a_i / D (D <= max_den) with sum a_i p_i = 0."""
    pts = np.array(points, dtype=np.int64)
    table, dens = _compositions(len(pts), max_den)
    hits = np.flatnonzero(~(table @ pts).any(axis=1))
    if not hits.size:
        return None
    row = hits[0]
    return [Fraction(int(a), int(dens[row])) for a in table[row]]


def hull_caratheodory_oracle(points: Sequence[Sequence[int]]) -> bool:
    """Complete exact decision by enumerating point subsets and solving the
    barycentric system with sympy's Gauss-Jordan solver."""
    import sympy

    uniq = [tuple(p) for p in dict.fromkeys(tuple(map(int, p)) for p in points)]
    d = len(uniq[0])
    for size in range(1, min(len(uniq), d + 1) + 1):
        for subset in itertools.combinations(uniq, size):
            a = sympy.Matrix([[p[i] for p in subset] for i in range(d)] + [[1] * size])
            b = sympy.Matrix([0] * d + [1])
            try:
                sol, params = a.gauss_jordan_solve(b)
            except ValueError:
                continue
            if params.shape[0]:
                continue  # affinely dependent; a smaller subset covers it
            if all(v >= 0 for v in sol):
                return True
    return False


def hull_oracle(points: Sequence[Sequence[int]], max_den: int = 20) -> bool:
    if hull_grid_witness(points, max_den) is not None:
        return True
    return hull_caratheodory_oracle(points)
