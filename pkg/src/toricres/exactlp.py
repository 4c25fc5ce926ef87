"""Small exact linear programs over the rationals.

A dense two-phase simplex with Bland's rule. Problems here have a handful of
variables and at most a few dozen constraints, so clarity beats speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    piv = tab[r][c]
    tab[r] = [v / piv for v in tab[r]]
    for i in range(len(tab)):
        if i != r and tab[i][c] != 0:
            f = tab[i][c]
            row_r = tab[r]
            tab[i] = [a - f * b for a, b in zip(tab[i], row_r)]
    basis[r] = c


def _simplex(tab: list[list[Fraction]], basis: list[int], ncols: int, allowed: set[int]) -> bool:
    """Maximize the objective stored in the last row (as reduced costs, minimizing -obj).

    The last row holds coefficients z_j with the convention that a negative entry
    means increasing x_j improves the objective. Returns False when unbounded.
    """
    m = len(tab) - 1
    while True:
        col = next((j for j in range(ncols) if j in allowed and tab[m][j] < 0), None)
        if col is None:
            return True
        best = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(tab, basis, best[1], col)


def linprog(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nvars: int | None = None,
) -> LPResult:
    """Maximize c.x subject to a_ub x <= b_ub, a_eq x = b_eq with x free."""
    n = len(c) if nvars is None else nvars
    rows: list[tuple[list[Fraction], Fraction, bool]] = []
    for a, b in zip(a_ub, b_ub):
        rows.append(([Fraction(v) for v in a], Fraction(b), False))
    for a, b in zip(a_eq, b_eq):
        rows.append(([Fraction(v) for v in a], Fraction(b), True))
    m = len(rows)
    n_slack = sum(1 for r in rows if not r[2])
    # columns: x+ (n), x- (n), slacks, artificials (m), rhs
    nstruct = 2 * n + n_slack
    ncols = nstruct + m
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    s = 0
    for i, (a, b, eq) in enumerate(rows):
        row = [Fraction(0)] * (ncols + 1)
        for j in range(n):
            row[j] = a[j]
            row[n + j] = -a[j]
        if not eq:
            row[2 * n + s] = Fraction(1)
            s += 1
        row[-1] = b
        if b < 0:
            row = [-v for v in row]
        row[nstruct + i] = Fraction(1)
        tab.append(row)
        basis.append(nstruct + i)
    # phase one: minimize the sum of artificials
    obj = [Fraction(0)] * (ncols + 1)
    for i in range(m):
        for j in range(ncols + 1):
            if j < nstruct or j == ncols:
                obj[j] -= tab[i][j]
    tab.append(obj)
    _simplex(tab, basis, ncols, set(range(nstruct)))
    if tab[m][-1] != 0:
        return LPResult("infeasible")
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= nstruct:
            col = next((j for j in range(nstruct) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)
    # phase two
    obj = [Fraction(0)] * (ncols + 1)
    for j in range(n):
        obj[j] = -Fraction(c[j])
        obj[n + j] = Fraction(c[j])
    for i in range(m):
        bj = basis[i]
        if bj < nstruct and obj[bj] != 0:
            f = obj[bj]
            obj = [a - f * b for a, b in zip(obj, tab[i])]
    tab[m] = obj
    if not _simplex(tab, basis, ncols, set(range(nstruct))):
        return LPResult("unbounded")
    xs = [Fraction(0)] * nstruct
    for i in range(m):
        if basis[i] < nstruct:
            xs[basis[i]] = tab[i][-1]
    x = tuple(xs[j] - xs[n + j] for j in range(n))
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult("optimal", value, x)


def feasible(a_ub: Sequence[Sequence] = (), b_ub: Sequence = (), a_eq: Sequence[Sequence] = (),
             b_eq: Sequence = (), nvars: int = 0) -> bool:
    return linprog([0] * nvars, a_ub, b_ub, a_eq, b_eq, nvars=nvars).status == "optimal"


def in_cone(generators: Sequence[Sequence], point: Sequence) -> bool:
    """Whether point is a nonnegative combination of the generators."""
    k = len(generators)
    dim = len(point)
    if k == 0:
        return all(v == 0 for v in point)
    a_eq = [[generators[j][i] for j in range(k)] for i in range(dim)]
    a_ub = [[-1 if j == i else 0 for j in range(k)] for i in range(k)]
    return feasible(a_ub, [0] * k, a_eq, list(point), nvars=k)
