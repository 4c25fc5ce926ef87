"""The exit torus T^phi, its periodic hyperplane stratification and the exit-path quiver.

Coordinates on T^phi come from a saturated basis b_1..b_c of ker(phi^*), so the
torus is R^c / Z^c and each ray rho contributes the hyperplane family
a_rho . w in Z with a_rho = (<b_i, beta u_rho>)_i.

A cell of the periodic arrangement in the universal cover is recorded by one
integer per active ray, ``level = 2k`` when a_rho . w = k on the cell and
``level = 2k - 1`` when k - 1 < a_rho . w < k. Translating a cell by n in Z^c
adds 2 a_rho . n to every level.

Cells are found from the vertices of the arrangement: every cell is bounded,
so its closure contains a vertex, and near a vertex the cells are the faces of
the central arrangement of hyperplanes through it. Those faces are the
covectors of the normals, generated by composing cocircuits.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from . import lattice as la
from .core import (DivisorClass, StackyFan, StackyMorphism, SupportFunction, class_of_support,
                   classify_stacky_morphism, kernel_saturated_basis)
from .errors import ToricError

DEFAULT_CODIM_BOUND = 4


@dataclass(frozen=True)
class ExitTorus:
    codim: int
    basis: tuple[tuple[int, ...], ...]
    ray_functionals: tuple[tuple[int, ...], ...]
    inactive_rays: frozenset[int]
    fan: StackyFan = field(compare=False, repr=False)

    @property
    def active_rays(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.ray_functionals)) if i not in self.inactive_rays)


@dataclass(frozen=True)
class Stratum:
    id: int
    dim: int
    sample: tuple[Fraction, ...]
    active: frozenset[int]
    levels: tuple[tuple[int, int], ...]  # (ray, level code) for active-functional rays
    support: SupportFunction
    bundle: DivisorClass
    vertices: tuple[tuple[Fraction, ...], ...] = field(compare=False, repr=False)
    orientation: tuple[tuple[Fraction, ...], ...] = field(compare=False, repr=False)

    @property
    def lift_constraints(self) -> list[tuple[int, int, bool]]:
        """(ray, k, is_equality): a.w = k, or k - 1 < a.w < k."""
        return [(r, -((-lv) // 2), lv % 2 == 0) for r, lv in self.levels]


@dataclass(frozen=True)
class ExitEdge:
    src: int
    dst: int
    exponent: tuple[int, ...]
    sign: int
    dst_lift_translation: tuple[int, ...]


@dataclass(frozen=True)
class ExitPathQuiver:
    strata: tuple[Stratum, ...]
    edges: tuple[ExitEdge, ...]
    identity_stratum: int
    torus: ExitTorus = field(compare=False, repr=False)


# ---------------------------------------------------------------------------
# the torus


def exit_torus(phi: StackyMorphism) -> ExitTorus:
    flags = classify_stacky_morphism(phi)
    if "immersion" not in flags:
        raise ToricError("NOT_IMMERSION", "the morphism is not an immersion of stacky fans")
    if not phi.phi.has_torsion_free_cokernel():
        raise ToricError("TORSION_COKERNEL", "coker(phi) has torsion")
    return torus_from_basis(phi.target, kernel_saturated_basis(phi.phi.transpose()))


def torus_from_basis(f: StackyFan, basis: Sequence[Sequence[int]]) -> ExitTorus:
    basis_t = tuple(tuple(int(x) for x in b) for b in basis)
    funcs = tuple(tuple(la.dot(b, img) for b in basis_t) for img in f.ray_images)
    inactive = frozenset(i for i, a in enumerate(funcs) if not any(a))
    return ExitTorus(len(basis_t), basis_t, funcs, inactive, f)


def bondal_support(f: StackyFan, m: Sequence) -> SupportFunction:
    """bF(m)(u_rho) = ceiling of <beta^* m, u_rho>."""
    vals = []
    for img in f.ray_images:
        v = sum((Fraction(a) * b for a, b in zip(m, img)), Fraction(0))
        vals.append(la.frac_ceil(v))
    return SupportFunction(tuple(vals))


# ---------------------------------------------------------------------------
# local face structure at a vertex


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@lru_cache(maxsize=None)
def _local_covectors(normals: tuple[tuple[int, ...], ...], c: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Faces of the central arrangement of the given normals: (sign vector, dimension)."""
    cocircuits: set[tuple[int, ...]] = set()
    for sub in combinations(range(len(normals)), c - 1):
        mat = [list(normals[i]) for i in sub]
        if mat and la.rank(mat) != c - 1:
            continue
        ker = la.kernel_basis(mat, c) if mat else la.identity(c)
        if len(ker) != 1:
            continue
        r = ker[0]
        s = tuple(_sign(la.dot(a, r)) for a in normals)
        cocircuits.add(s)
        cocircuits.add(tuple(-x for x in s))
    zero = (0,) * len(normals)
    seen = {zero}
    frontier = [zero]
    cocs = sorted(cocircuits)
    while frontier:
        nxt = []
        for x in frontier:
            for y in cocs:
                z = tuple(a if a else b for a, b in zip(x, y))
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    out = []
    for s in sorted(seen):
        zeros = [list(normals[i]) for i in range(len(normals)) if s[i] == 0]
        out.append((s, c - (la.rank(zeros) if zeros else 0)))
    return tuple(out)


def _frac_part(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(x - la.frac_floor(x) for x in v)


def _floor_vec(v: Sequence[Fraction]) -> tuple[int, ...]:
    return tuple(la.frac_floor(x) for x in v)


class _Arrangement:
    """Helper holding the active functionals and lift bookkeeping."""

    def __init__(self, T: ExitTorus):
        self.T = T
        self.c = T.codim
        self.active = T.active_rays
        self.A = [T.ray_functionals[r] for r in self.active]
        gens = [[2 * a[i] for a in self.A] for i in range(self.c)]
        self.hnf, self.piv = la.hermite_rows(gens)
        self.twoA = [[2 * x for x in a] for a in self.A]

    def key(self, levels: Sequence[int]) -> tuple[int, ...]:
        return tuple(la.reduce_mod_rows(levels, self.hnf, self.piv))

    def translate(self, levels: Sequence[int], n: Sequence[int]) -> tuple[int, ...]:
        return tuple(lv + 2 * la.dot(a, n) for lv, a in zip(levels, self.A))

    def translation_between(self, frm: Sequence[int], to: Sequence[int]) -> tuple[int, ...]:
        n = la.solve_integer(self.twoA, [b - a for a, b in zip(frm, to)])
        if n is None:
            raise AssertionError("lifts are not translates")
        return tuple(n)

    def vertices(self) -> list[tuple[Fraction, ...]]:
        c = self.c
        out: set[tuple[Fraction, ...]] = set()
        for sub in combinations(range(len(self.A)), c):
            mat = [self.A[i] for i in sub]
            if la.determinant(mat) == 0:
                continue
            inv = la.inverse_rational(mat)
            gens = [_frac_part([inv[r][j] for r in range(c)]) for j in range(c)]
            group = {tuple(Fraction(0) for _ in range(c))}
            frontier = list(group)
            while frontier:
                nxt = []
                for p in frontier:
                    for g in gens:
                        q = _frac_part([x + y for x, y in zip(p, g)])
                        if q not in group:
                            group.add(q)
                            nxt.append(q)
                frontier = nxt
            out |= group
        return sorted(out)

    def on_vertex(self, v: Sequence[Fraction]):
        """Indices (into active) of hyperplanes through v and their levels."""
        through = []
        values = []
        for a in self.A:
            values.append(sum((x * y for x, y in zip(a, v)), Fraction(0)))
        for i, val in enumerate(values):
            if val.denominator == 1:
                through.append(i)
        return through, values

    def levels_at(self, v, through, values, signs) -> tuple[int, ...]:
        lv = []
        s_of = dict(zip(through, signs))
        for i, val in enumerate(values):
            if i in s_of:
                k = int(val)
                s = s_of[i]
                lv.append(2 * k if s == 0 else (2 * k - 1 if s < 0 else 2 * k + 1))
            else:
                lv.append(2 * la.frac_ceil(val) - 1)
        return tuple(lv)


def _orientation_basis(eq_normals: list[tuple[int, ...]], c: int) -> tuple[tuple[Fraction, ...], ...]:
    if not eq_normals:
        return tuple(tuple(Fraction(int(i == j)) for j in range(c)) for i in range(c))
    ker = la.kernel_basis([list(a) for a in eq_normals], c)
    return tuple(tuple(Fraction(x) for x in row) for row in ker)


def enumerate_strata(T: ExitTorus, codim_bound: int = DEFAULT_CODIM_BOUND) -> list[Stratum]:
    """One stratum per cell of the periodic arrangement on T^phi, ordered by
    dimension descending then by canonical sample."""
    f = T.fan
    c = T.codim
    if c > codim_bound:
        raise ToricError("CODIM_LIMIT", f"codimension {c} exceeds the bound {codim_bound}")
    if c == 0:
        zero = SupportFunction((0,) * f.n_rays)
        return [Stratum(0, 0, (), frozenset(), (), zero, class_of_support(zero, f), ((),), ())]
    arr = _Arrangement(T)
    if not arr.A or la.rank(arr.A) < c:
        raise ToricError("NOT_SMOOTHLY_COVERED", "ray functionals do not span the exit torus; strata are unbounded")
    cells: dict[tuple[int, ...], dict] = {}
    for v in arr.vertices():
        through, values = arr.on_vertex(v)
        normals = tuple(tuple(arr.A[i]) for i in through)
        for signs, dim in _local_covectors(normals, c):
            levels = arr.levels_at(v, through, values, signs)
            key = arr.key(levels)
            entry = cells.get(key)
            if entry is None:
                cells[key] = {"levels": levels, "dim": dim, "verts": {v}}
            else:
                n = arr.translation_between(entry["levels"], levels)
                entry["verts"].add(tuple(x - k for x, k in zip(v, n)))
    raw = []
    for key, entry in cells.items():
        verts = sorted(entry["verts"])
        g = tuple(sum(col, Fraction(0)) / len(verts) for col in zip(*verts))
        n0 = _floor_vec(g)
        levels = arr.translate(entry["levels"], [-x for x in n0])
        verts = tuple(tuple(x - k for x, k in zip(p, n0)) for p in verts)
        sample = tuple(x - k for x, k in zip(g, n0))
        raw.append((entry["dim"], sample, levels, verts))
    raw.sort(key=lambda t: (-t[0], t[1]))
    out = []
    for sid, (dim, sample, levels, verts) in enumerate(raw):
        vals = [0] * f.n_rays
        active = set()
        eq_normals = []
        lv_pairs = []
        for ray, lv, a in zip(arr.active, levels, arr.A):
            vals[ray] = -((-lv) // 2)
            lv_pairs.append((ray, lv))
            if lv % 2 == 0:
                active.add(ray)
                eq_normals.append(a)
        sup = SupportFunction(tuple(vals))
        out.append(Stratum(sid, dim, sample, frozenset(active), tuple(lv_pairs), sup, class_of_support(sup, f),
                           verts, _orientation_basis(eq_normals, c)))
    return out


def _coords_in_basis(basis: Sequence[Sequence[Fraction]], vec: Sequence[Fraction]) -> list[Fraction]:
    cols = la.transpose([list(b) for b in basis], len(vec))
    sol = la.solve_rational(cols, list(vec))
    if sol is None:
        raise AssertionError("vector outside the span of the basis")
    return sol


def _incidence_sign(sigma: Stratum, tau: Stratum, shift: Sequence[int]) -> int:
    nu = [t + k - s for t, k, s in zip(tau.sample, shift, sigma.sample)]
    vecs = [nu] + [list(b) for b in tau.orientation]
    mat = [_coords_in_basis(sigma.orientation, v) for v in vecs]
    det = la.determinant(mat)
    if det == 0:
        raise AssertionError("degenerate orientation")
    return 1 if det > 0 else -1


def exit_path_quiver(T: ExitTorus, strata: Sequence[Stratum] | None = None) -> ExitPathQuiver:
    """Edges from each canonical lift to every facet lift in its closure."""
    if strata is None:
        strata = enumerate_strata(T)
    strata = tuple(strata)
    f = T.fan
    if T.codim == 0:
        return ExitPathQuiver(strata, (), 0, T)
    arr = _Arrangement(T)
    by_key = {arr.key([lv for _, lv in s.levels]): s for s in strata}
    edges: list[ExitEdge] = []
    for s in strata:
        if s.dim == 0:
            continue
        s_levels = [lv for _, lv in s.levels]
        found: dict[tuple[int, tuple[int, ...]], None] = {}
        for u in s.vertices:
            n_u = _floor_vec(u)
            v = tuple(x - k for x, k in zip(u, n_u))
            through, values = arr.on_vertex(v)
            normals = tuple(tuple(arr.A[i]) for i in through)
            # sign vector of s at u
            xs = []
            for i in through:
                k = int(values[i]) + la.dot(arr.A[i], n_u)
                lv = s_levels[i]
                xs.append(0 if lv == 2 * k else (-1 if lv == 2 * k - 1 else 1))
            for signs, dim in _local_covectors(normals, T.codim):
                if dim != s.dim - 1:
                    continue
                if any(y != 0 and y != x for x, y in zip(xs, signs)):
                    continue
                lv_face = arr.translate(arr.levels_at(v, through, values, signs), n_u)
                tau = by_key[arr.key(lv_face)]
                m = arr.translation_between([lv for _, lv in tau.levels], lv_face)
                found[(tau.id, m)] = None
        for tau_id, m in sorted(found):
            tau = strata[tau_id]
            f_tau = list(tau.support.values)
            for ray, a in zip(arr.active, arr.A):
                f_tau[ray] += la.dot(a, m)
            exponent = tuple(a - b for a, b in zip(s.support.values, f_tau))
            if any(e < 0 for e in exponent):
                raise AssertionError("negative boundary exponent")
            edges.append(ExitEdge(s.id, tau_id, exponent, _incidence_sign(s, tau, m), m))
    ident = next(s.id for s in strata if s.dim == 0 and all(x == 0 for x in s.sample))
    return ExitPathQuiver(strata, tuple(edges), ident, T)


def stratify(phi: StackyMorphism, codim_bound: int = DEFAULT_CODIM_BOUND) -> ExitPathQuiver:
    T = exit_torus(phi)
    return exit_path_quiver(T, enumerate_strata(T, codim_bound))


def thomsen_collection(f: StackyFan) -> set[DivisorClass]:
    """Classes O(bF(m)) over all strata of the arrangement on M_R / M."""
    from .fans import point_inclusion

    T = exit_torus(point_inclusion(f))
    return {s.bundle for s in enumerate_strata(T, codim_bound=max(DEFAULT_CODIM_BOUND, T.codim))}


def random_interior_point(s: Stratum, rng: random.Random) -> tuple[Fraction, ...]:
    """A random point of the relative interior of the canonical lift of s."""
    weights = [Fraction(rng.randint(1, 997), rng.randint(1, 997)) for _ in s.vertices]
    total = sum(weights)
    return tuple(sum((w * v[i] for w, v in zip(weights, s.vertices)), Fraction(0)) / total
                 for i in range(len(s.sample)))


def point_in_torus(T: ExitTorus, w: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """The point sum w_i b_i of M_R."""
    n = T.fan.rank_N
    return tuple(sum((Fraction(wi) * b[j] for wi, b in zip(w, T.basis)), Fraction(0)) for j in range(n))
