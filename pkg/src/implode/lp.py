"""Exact rational feasibility LP (phase-one simplex, Bland's rule).

``feasible(A, b)`` decides whether {x >= 0 : A x = b} is nonempty.  It returns
either a feasible point or a Farkas certificate y with y^T A <= 0 and
y^T b > 0, both in exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    x: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None


def feasible(a: Sequence[Sequence], b: Sequence) -> LPResult:
    m = len(a)
    n = len(a[0]) if m else 0
    A = [[Fraction(v) for v in row] for row in a]
    B = [Fraction(v) for v in b]
    if m == 0:
        return LPResult(True, x=tuple(Fraction(0) for _ in range(n)))
    # flip rows so b >= 0; remember signs to undo in the certificate
    sign = []
    for i in range(m):
        if B[i] < 0:
            A[i] = [-v for v in A[i]]
            B[i] = -B[i]
            sign.append(-1)
        else:
            sign.append(1)
    # tableau columns: x_0..x_{n-1}, artificial a_0..a_{m-1}
    ncol = n + m
    T = [A[i] + [Fraction(int(i == j)) for j in range(m)] + [B[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [Fraction(0)] * n + [Fraction(1)] * m

    def reduced(j):
        return cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))

    while True:
        enter = next((j for j in range(ncol) if reduced(j) < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # unbounded cannot happen for phase one
            raise RuntimeError("phase-one LP unbounded")
        p = T[leave][enter]
        T[leave] = [v / p for v in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [u - f * w for u, w in zip(T[i], T[leave])]
        basis[leave] = enter

    value = sum(cost[basis[i]] * T[i][-1] for i in range(m))
    if value == 0:
        x = [Fraction(0)] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = T[i][-1]
        return LPResult(True, x=tuple(x))
    # dual y = c_B B^{-1}; B^{-1} sits in the artificial columns of the tableau
    y = [sum(cost[basis[i]] * T[i][n + k] for i in range(m)) for k in range(m)]
    # optimal reduced costs give y.A'_j <= 0 and y.b' = value > 0; undo row flips
    y = [sign[k] * y[k] for k in range(m)]
    return LPResult(False, farkas=tuple(y))
