"""Complexes of line bundles with sparse Cox-polynomial differentials.

Homological grading: ``d[k]`` maps C_k to C_{k-1}; its entries are keyed by
``(row, col)`` with ``row`` indexing C_{k-1} and ``col`` indexing C_k.
Summands are stored as divisor vectors (D = -F), so classes and homogeneity
can be read off directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import lattice as la
from .core import DivisorClass, StackyFan, pic_canonical_form
from .poly import Poly

Sparse = dict[tuple[int, int], Poly]


@dataclass
class LineBundleComplex:
    nvars: int
    summands: dict[int, list]
    differential: dict[int, Sparse]
    fan: StackyFan | None = field(default=None, compare=False, repr=False)
    cells: dict[int, list] | None = field(default=None, compare=False, repr=False)

    def degrees(self) -> list[int]:
        return sorted(k for k, v in self.summands.items() if v)

    def rank(self, k: int) -> int:
        return len(self.summands.get(k, ()))

    def ranks(self) -> dict[int, int]:
        return {k: self.rank(k) for k in self.degrees()}

    def length(self) -> int:
        ds = self.degrees()
        return max(ds) - min(ds) if ds else 0

    def terms(self, k: int) -> list[DivisorClass]:
        if self.fan is None:
            raise ValueError("complex has no ambient fan")
        return [pic_canonical_form(d, self.fan) for d in self.summands.get(k, ())]

    def entry(self, k: int, row: int, col: int) -> Poly:
        return self.differential.get(k, {}).get((row, col), Poly.zero(self.nvars))

    def map_entries(self, fn: Callable[[Poly], Poly], nvars: int | None = None) -> "LineBundleComplex":
        diff = {}
        for k, mat in self.differential.items():
            new = {}
            for key, p in mat.items():
                q = fn(p)
                if not q.is_zero():
                    new[key] = q
            diff[k] = new
        return LineBundleComplex(self.nvars if nvars is None else nvars, dict(self.summands), diff, self.fan,
                                 self.cells)

    def specialize(self, k: int, point: Sequence) -> list[list[Fraction]]:
        rows, cols = self.rank(k - 1), self.rank(k)
        out = [[Fraction(0)] * cols for _ in range(rows)]
        for (i, j), p in self.differential.get(k, {}).items():
            out[i][j] = p.evaluate(point)
        return out

    def homology_ranks(self, point: Sequence) -> dict[int, int]:
        """Dimensions of homology of the scalar complex obtained by evaluating at point."""
        ranks = {}
        for k in self.degrees() + [max(self.degrees(), default=0) + 1]:
            m = self.specialize(k, point)
            ranks[k] = la.rank(m) if m and m[0] else 0
        out = {}
        for k in self.degrees():
            out[k] = self.rank(k) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        return out


def sparse_matmul(a: Sparse, b: Sparse, nvars: int) -> Sparse:
    """(a * b) for sparse matrices keyed (row, col)."""
    by_row: dict[int, list[tuple[int, Poly]]] = {}
    for (i, j), p in b.items():
        by_row.setdefault(i, []).append((j, p))
    out: dict[tuple[int, int], Poly] = {}
    for (i, t), p in a.items():
        for j, q in by_row.get(t, ()):
            key = (i, j)
            out[key] = out.get(key, Poly.zero(nvars)) + p * q
    return {k: v for k, v in out.items() if not v.is_zero()}


def sparse_add(a: Sparse, b: Sparse, nvars: int, scale_b=1) -> Sparse:
    out = dict(a)
    for key, p in b.items():
        out[key] = out.get(key, Poly.zero(nvars)) + p * scale_b
    return {k: v for k, v in out.items() if not v.is_zero()}


def sparse_identity(n: int, nvars: int) -> Sparse:
    return {(i, i): Poly.const(nvars, 1) for i in range(n)}


def check_d_squared(c: LineBundleComplex) -> bool:
    """Exact identity d_{k-1} d_k = 0 in every degree."""
    for k in c.degrees():
        if k - 1 in c.summands and sparse_matmul(c.differential.get(k - 1, {}), c.differential.get(k, {}), c.nvars):
            return False
    return True


def homogeneity_violations(c: LineBundleComplex) -> list[tuple[int, int, int]]:
    """Entries whose monomials do not map the source class to the target class."""
    if c.fan is None:
        raise ValueError("complex has no ambient fan")
    bad = []
    for k, mat in c.differential.items():
        for (i, j), p in mat.items():
            src = c.summands[k][j]
            dst = c.summands[k - 1][i]
            for exp in p.terms:
                diff = [t - s - e for s, t, e in zip(src, dst, exp)]
                # target divisor = source divisor + exponent, up to a linear function
                if pic_canonical_form(diff, c.fan) != pic_canonical_form([0] * len(diff), c.fan):
                    bad.append((k, i, j))
                    break
    return bad


def direct_sum(parts: Iterable[LineBundleComplex]) -> LineBundleComplex:
    parts = list(parts)
    nvars = parts[0].nvars
    summands: dict[int, list] = {}
    diff: dict[int, Sparse] = {}
    offsets: dict[int, int] = {}
    for p in parts:
        local = {k: offsets.get(k, 0) for k in p.summands}
        for k, mat in p.differential.items():
            tgt = diff.setdefault(k, {})
            for (i, j), q in mat.items():
                tgt[(i + local.get(k - 1, 0), j + local.get(k, 0))] = q
        for k, items in p.summands.items():
            summands.setdefault(k, []).extend(items)
            offsets[k] = offsets.get(k, 0) + len(items)
    return LineBundleComplex(nvars, summands, diff, parts[0].fan)


def isomorphic_up_to_signs(a: LineBundleComplex, b: LineBundleComplex, compare_classes: bool = True) -> bool:
    """Whether b is obtained from a by permuting summands within each degree and
    rescaling summands by +-1. Decided by backtracking over summand bijections."""
    if a.ranks() != b.ranks() or a.nvars != b.nvars:
        return False
    slots = [(k, i) for k in a.degrees() for i in range(a.rank(k))]
    if compare_classes and a.fan is not None and b.fan is not None:
        cls_a = {k: a.terms(k) for k in a.degrees()}
        cls_b = {k: b.terms(k) for k in b.degrees()}
    else:
        cls_a = cls_b = None
    perm: dict[tuple[int, int], int] = {}
    sign: dict[tuple[int, int], int] = {}
    used: dict[int, set[int]] = {k: set() for k in a.degrees()}

    def consistent(k: int, i: int) -> bool:
        bi, si = perm[(k, i)], sign[(k, i)]
        for (kk, jj), bj in perm.items():
            sj = sign[(kk, jj)]
            if kk == k + 1:
                if b.entry(kk, bi, bj) * (si * sj) != a.entry(kk, i, jj):
                    return False
            elif kk == k - 1:
                if b.entry(k, bj, bi) * (si * sj) != a.entry(k, jj, i):
                    return False
        return True

    def search(pos: int) -> bool:
        if pos == len(slots):
            return True
        k, i = slots[pos]
        for j in range(b.rank(k)):
            if j in used[k]:
                continue
            if cls_a is not None and cls_a[k][i] != cls_b[k][j]:
                continue
            for s in (1, -1):
                perm[(k, i)], sign[(k, i)] = j, s
                used[k].add(j)
                if consistent(k, i) and search(pos + 1):
                    return True
                used[k].discard(j)
                del perm[(k, i)], sign[(k, i)]
        return False

    return search(0)
