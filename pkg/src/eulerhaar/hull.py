"""Exact test of whether the origin lies in the convex hull of a finite set of
integer points.

Decides feasibility of  w >= 0, sum w = 1, sum w_i p_i = 0  in rational
arithmetic.  Small sets enumerate affinely independent subsets (Caratheodory),
larger ones run a phase-one simplex with Bland's rule.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

CARATHEODORY_MAX_POINTS = 12


class EmptySpectrumError(ValueError):
    pass


def _prepare(points: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    pts = [tuple(int(v) for v in p) for p in points]
    if not pts:
        raise EmptySpectrumError("hull test needs at least one point")
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise ValueError(f"points have mixed dimensions {sorted(dims)}")
    return pts


def _solve_barycentric(subset: Sequence[tuple[int, ...]]) -> list[Fraction] | None:
    """Unique w with sum w_i p_i = 0 and sum w_i = 1, or None when the system is
    inconsistent or the subset is affinely dependent."""
    d, s = len(subset[0]), len(subset)
    rows = [[Fraction(p[r]) for p in subset] + [Fraction(0)] for r in range(d)]
    rows.append([Fraction(1)] * s + [Fraction(1)])
    pivot_row = 0
    pivots = []
    for col in range(s):
        piv = next((r for r in range(pivot_row, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            return None  # dependent columns
        rows[pivot_row], rows[piv] = rows[piv], rows[pivot_row]
        inv = 1 / rows[pivot_row][col]
        rows[pivot_row] = [v * inv for v in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    if any(rows[r][s] != 0 for r in range(pivot_row, len(rows))):
        return None
    return [rows[i][s] for i in range(s)]


def _caratheodory(pts: list[tuple[int, ...]]) -> list[Fraction] | None:
    uniq = list(dict.fromkeys(pts))
    d = len(uniq[0])
    for size in range(1, min(len(uniq), d + 1) + 1):
        for idx in itertools.combinations(range(len(uniq)), size):
            w = _solve_barycentric([uniq[i] for i in idx])
            if w is not None and all(v >= 0 for v in w):
                weights = dict(zip((uniq[i] for i in idx), w))
                return _spread(pts, weights)
    return None


def _spread(pts, weights) -> list[Fraction]:
    # put each point's weight on its first occurrence
    out, seen = [], set()
    for p in pts:
        if p in weights and p not in seen:
            out.append(weights[p])
            seen.add(p)
        else:
            out.append(Fraction(0))
    return out


def _simplex(pts: list[tuple[int, ...]]) -> list[Fraction] | None:
    """Phase-one simplex on  A w + a = b,  minimising sum(a)."""
    d, r = len(pts[0]), len(pts)
    m = d + 1
    a_rows = [[Fraction(p[i]) for p in pts] for i in range(d)] + [[Fraction(1)] * r]
    rhs = [Fraction(0)] * d + [Fraction(1)]
    ncol = r + m
    tab = [a_rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [r + i for i in range(m)]
    cost = [Fraction(0)] * r + [Fraction(1)] * m

    while True:
        # reduced cost c_j - c_B B^-1 A_j, read off the current tableau
        reduced = [cost[j] - sum(cost[basis[i]] * tab[i][j] for i in range(m)) for j in range(ncol)]
        enter = next((j for j in range(ncol) if reduced[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # cannot happen: the phase-one objective is bounded below
            raise RuntimeError("unbounded phase-one problem")
        row = best[1]
        piv = tab[row][enter]
        tab[row] = [v / piv for v in tab[row]]
        for i in range(m):
            if i != row and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[row])]
        basis[row] = enter

    infeasibility = sum(tab[i][-1] for i in range(m) if basis[i] >= r)
    if infeasibility != 0:
        return None
    w = [Fraction(0)] * r
    for i, b in enumerate(basis):
        if b < r:
            w[b] = tab[i][-1]
    return w


def hull_witness(points: Iterable[Sequence[int]], method: str = "auto") -> list[Fraction] | None:
    """Convex weights (aligned with ``points``) expressing the origin, or None.

    ``method`` is "auto", "caratheodory" or "simplex".
    """
    pts = _prepare(points)
    if method == "auto":
        method = "caratheodory" if len(set(pts)) <= CARATHEODORY_MAX_POINTS else "simplex"
    if method == "caratheodory":
        return _caratheodory(pts)
    if method == "simplex":
        return _simplex(pts)
    raise ValueError(f"unknown method {method!r}")


def hull_contains_zero(points: Iterable[Sequence[int]], method: str = "auto") -> bool:
    """True iff the origin lies in the convex hull of ``points``."""
    return hull_witness(points, method) is not None


def check_witness(points: Sequence[Sequence[int]], weights: Sequence[Fraction]) -> bool:
    """Exact verification of a convex-combination certificate."""
    if len(points) != len(weights) or any(w < 0 for w in weights) or sum(weights) != 1:
        return False
    d = len(points[0])
    return all(sum(w * p[i] for w, p in zip(weights, points)) == 0 for i in range(d))
