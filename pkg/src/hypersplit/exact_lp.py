"""Exact phase-one simplex over the rationals.

Only feasibility is needed here: find ``x >= 0`` with ``A x = b``.  Rows are
scaled to integers and pivoted fraction-free (every division is exact), so
the arithmetic stays in Python ints.  Bland's rule guarantees termination.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

__all__ = ["feasible_point"]


def _int_row(row: Sequence, rhs) -> list[int]:
    vals = [Fraction(v) for v in row] + [Fraction(rhs)]
    den = lcm(*(v.denominator for v in vals))
    out = [int(v * den) for v in vals]
    if out[-1] < 0:
        out = [-v for v in out]
    return out


def feasible_point(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Return some ``x >= 0`` with ``A x = b``, or ``None`` if none exists."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    width = cols + rows
    T: list[list[int]] = []
    for i in range(rows):
        r = _int_row(A[i], b[i])
        art = [0] * rows
        art[i] = 1
        T.append(r[:-1] + art + [r[-1]])
    basis = [cols + i for i in range(rows)]
    # reduced costs for "minimize the sum of artificials"
    cost = [0] * (width + 1)
    for row in T:
        for j in range(cols):
            cost[j] -= row[j]
        cost[width] -= row[width]
    # with fraction-free pivoting every entry is scaled by the last pivot D;
    # the initial artificial basis has D = 1
    D = 1

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        for i in range(rows):
            coef = T[i][enter]
            if coef > 0:
                if leave is None:
                    leave = i
                    continue
                # compare rhs_i / coef with rhs_leave / coef_leave
                lhs = T[i][width] * T[leave][enter]
                rhs = T[leave][width] * coef
                if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                    leave = i
        if leave is None:  # phase one is bounded below; defensive only
            break
        D = _pivot(T, cost, leave, enter, D)
        basis[leave] = enter

    if cost[width] != 0:
        return None
    x = [Fraction(0)] * cols
    for i, j in enumerate(basis):
        if j < cols:
            x[j] = Fraction(T[i][width], T[i][j])
    return x


def _pivot(T: list[list[int]], cost: list[int], r: int, c: int, D: int) -> int:
    prow = T[r]
    p = prow[c]
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f:
            T[i] = [(v * p - f * w) // D for v, w in zip(row, prow)]
        elif p != D:
            T[i] = [(v * p) // D for v in row]
    f = cost[c]
    cost[:] = [(v * p - f * w) // D for v, w in zip(cost, prow)]
    return p
