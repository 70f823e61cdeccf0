"""Exact rational linear feasibility (phase-one simplex with Bland's rule)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__ = ["feasible_point", "convex_combination"]


def feasible_point(
    A: Sequence[Sequence[Fraction | int]], b: Sequence[Fraction | int]
) -> list[Fraction] | None:
    """Return some ``x >= 0`` with ``A x = b``, or ``None`` if none exists.

    Runs phase one of the simplex method on a dense Fraction tableau.  Bland's
    pivoting rule guarantees termination; the result is exact.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    # tableau rows: [coefficients of x (n) | artificials (m) | rhs]
    rows: list[list[Fraction]] = []
    for i in range(m):
        coeffs = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        rows.append(coeffs + art + [rhs])
    width = n + m
    basis = list(range(n, n + m))
    # objective: minimise the sum of artificials, expressed in non-basic terms
    cost = [Fraction(0)] * (width + 1)
    for row in rows:
        for j in range(width + 1):
            cost[j] -= row[j]
    for j in range(n, width):
        cost[j] = Fraction(0)

    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        leave_row, best = None, None
        for i, row in enumerate(rows):
            if row[entering] > 0:
                ratio = row[width] / row[entering]
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave_row])
                ):
                    best, leave_row = ratio, i
        if leave_row is None:  # unbounded direction; cannot happen in phase one
            break
        _pivot(rows, cost, leave_row, entering, width)
        basis[leave_row] = entering

    if -cost[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rows[i][width]
    return x


def _pivot(rows, cost, r, c, width):
    prow = rows[r]
    inv = 1 / prow[c]
    if inv != 1:
        for j in range(width + 1):
            if prow[j]:
                prow[j] *= inv
    nz = [j for j in range(width + 1) if prow[j]]
    for i, row in enumerate(rows):
        if i != r and row[c]:
            f = row[c]
            for j in nz:
                row[j] -= f * prow[j]
    if cost[c]:
        f = cost[c]
        for j in nz:
            cost[j] -= f * prow[j]


def convex_combination(
    points: Sequence[Sequence[Fraction]], target: Sequence[Fraction]
) -> list[Fraction] | None:
    """Weights ``λ >= 0`` summing to one with ``Σ λ_k points[k] = target``."""
    if not points:
        return None
    dim = len(target)
    A = [[p[d] for p in points] for d in range(dim)]
    A.append([Fraction(1)] * len(points))
    return feasible_point(A, list(target) + [Fraction(1)])
