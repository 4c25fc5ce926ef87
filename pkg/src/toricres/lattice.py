"""Exact integer and rational linear algebra on small dense matrices.

Matrices are lists of rows of Python ints (or Fractions where noted).
Everything here is arbitrary precision; no floating point is used.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence], cols: int | None = None) -> list[list]:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], inner: int | None = None) -> list[list]:
    """Product of an (r x k) and a (k x c) matrix; handles empty shapes."""
    rows = len(a)
    k = len(b) if inner is None else inner
    cols = len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                row = out[i]
                for j in range(cols):
                    if bt[j]:
                        row[j] += x * bt[j]
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return vec_gcd(v) == 1


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0


def smith_normal_form(a: Matrix, rows: int | None = None, cols: int | None = None):
    """Return (U, D, V) with U * A * V = D, U and V unimodular.

    D is diagonal with non-negative entries and d_i | d_{i+1}.
    """
    m = len(a) if rows is None else rows
    n = (len(a[0]) if a else 0) if cols is None else cols
    d = [list(r) for r in a] if a else zeros(m, n)
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):  # col_dst += q * col_src
        for r in d:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        # pick the smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        done = False
            if done:
                # divisibility: every remaining entry must be a multiple of the pivot
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if d[i][j] % d[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # bring the new smallest entry of row/column t into the pivot
            best = (t, t)
            for i in range(t, m):
                if d[i][t] and abs(d[i][t]) < abs(d[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, n):
                if d[t][j] and abs(d[t][j]) < abs(d[best[0]][best[1]]):
                    best = (t, j)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, d, v


def smith_diagonal(a: Matrix, rows: int | None = None, cols: int | None = None) -> list[int]:
    _, d, _ = smith_normal_form(a, rows, cols)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def rank(a: Sequence[Sequence]) -> int:
    return len(row_echelon([list(map(Fraction, r)) for r in a])[1])


def row_echelon(a: list[list[Fraction]]):
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    m = [list(r) for r in a]
    pivots: list[int] = []
    if not m:
        return m, pivots
    n = len(m[0])
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution x of A x = b over Q, or None when inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(rows)]
    red, piv = row_echelon(aug)
    if cols in piv:
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv):
        x[c] = red[i][cols]
    return x


def solve_integer(a: Sequence[Sequence], b: Sequence[int]) -> list[int] | None:
    """Integer solution of A x = b, or None. Uses the Smith form."""
    m = len(a)
    n = len(a[0]) if m else 0
    u, d, v = smith_normal_form([list(r) for r in a], m, n)
    ub = matvec(u, b)
    y = [0] * n
    for i in range(m):
        di = d[i][i] if i < n else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
    return matvec(v, y)


def inverse_rational(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [[Fraction(x) for x in a[i]] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, piv = row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def determinant(a: Sequence[Sequence]) -> Fraction:
    n = len(a)
    m = [[Fraction(x) for x in r] for r in a]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def hermite_rows(a: Sequence[Sequence[int]], column_order: Sequence[int] | None = None) -> tuple[Matrix, list[int]]:
    """Row-style Hermite normal form of the row lattice of A.

    Columns are visited in ``column_order`` (default left to right). Returns the
    nonzero rows and the pivot column of each. Pivots are positive and entries
    of other rows in a pivot column are reduced into [0, pivot).
    """
    rows = [list(map(int, r)) for r in a if any(r)]
    n = len(a[0]) if a else 0
    order = list(range(n)) if column_order is None else list(column_order)
    out: Matrix = []
    pivots: list[int] = []
    for c in order:
        active = [r for r in rows if r[c] != 0]
        rest = [r for r in rows if r[c] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            p = active[0]
            nxt = [p]
            for r in active[1:]:
                q = r[c] // p[c]
                r = [x - q * y for x, y in zip(r, p)]
                if r[c] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        if active:
            p = active[0]
            if p[c] < 0:
                p = [-x for x in p]
            for i, prev in enumerate(out):
                q = prev[c] // p[c]
                if q:
                    out[i] = [x - q * y for x, y in zip(prev, p)]
            out.append(p)
            pivots.append(c)
        rows = rest
    # final reduction of earlier rows against later pivots
    for j, (p, c) in enumerate(zip(out, pivots)):
        for i in range(len(out)):
            if i != j:
                q = out[i][c] // p[c]
                if q:
                    out[i] = [x - q * y for x, y in zip(out[i], p)]
    return out, pivots


def reduce_mod_rows(v: Sequence[int], hnf: Matrix, pivots: Sequence[int]) -> list[int]:
    """Reduce v modulo the row lattice given in Hermite form."""
    w = list(map(int, v))
    for row, c in zip(hnf, pivots):
        q = w[c] // row[c]
        if q:
            w = [x - q * y for x, y in zip(w, row)]
    return w


def kernel_basis(a: Sequence[Sequence[int]], cols: int) -> Matrix:
    """Saturated integer basis of ker(A), returned as rows in Hermite form."""
    m = len(a)
    if m == 0:
        return identity(cols)
    _, d, v = smith_normal_form([list(r) for r in a], m, cols)
    r = sum(1 for i in range(min(m, cols)) if d[i][i])
    basis = [[v[i][j] for i in range(cols)] for j in range(r, cols)]
    if not basis:
        return []
    hnf, _ = hermite_rows(basis)
    return hnf


def image_saturated(a: Sequence[Sequence[int]]) -> bool:
    """True when the row lattice of A is saturated in Z^n."""
    rows = [r for r in a if any(r)]
    if not rows:
        return True
    ds = smith_diagonal([list(r) for r in rows])
    return all(x == 1 for x in ds)


def frac_floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def frac_ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)
