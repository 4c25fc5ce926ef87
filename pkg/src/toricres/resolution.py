"""Line-bundle resolutions of toric substacks and their functoriality.

``build_resolution`` assembles the cellular complex of the exit-path quiver:
one summand O(bF(sigma)) per stratum in degree dim(sigma), and the signed
boundary monomials as differential entries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from math import comb
from typing import Sequence

from . import lattice as la
from .complexes import LineBundleComplex, Sparse, check_d_squared, direct_sum, isomorphic_up_to_signs
from .core import (LatticeMap, StackyFan, StackyMorphism, classify_stacky_morphism, kernel_saturated_basis,
                   product_stacky_fan)
from .errors import ToricError
from .morse import (MorseReductionResult, QuiverSheaf, exit_morse_quiver, morse_reduce,
                    rho_positive_matching, sheaf_complex)
from .poly import Poly
from .strat import (DEFAULT_CODIM_BOUND, ExitPathQuiver, enumerate_strata, exit_path_quiver, exit_torus,
                    torus_from_basis)

__all__ = [
    "LineBundleComplex", "AugmentedComplex", "ChartRestriction", "FiberReport", "build_resolution",
    "tensor_resolutions", "diagonal_resolution", "restrict_to_chart", "pushforward_finite_quotient_complex",
    "pullback_torus_quotient_check", "pullback_along_torus_quotient", "iflat_extend_complex", "check_d_squared",
    "fiber_exactness_check", "koszul_compare", "point_koszul_model", "unit_complex",
]


@dataclass
class AugmentedComplex:
    complex: LineBundleComplex
    alpha: int
    target: StackyMorphism | None = None
    quiver: ExitPathQuiver | None = field(default=None, repr=False)

    @property
    def codim(self) -> int:
        if self.target is None:
            return self.complex.length()
        return self.target.target.rank_N - self.target.source.rank_N


def build_resolution(phi: StackyMorphism, codim_bound: int = DEFAULT_CODIM_BOUND) -> AugmentedComplex:
    from .core import smooth_stacky_chart_cover

    smooth_stacky_chart_cover(phi.target)
    T = exit_torus(phi)
    Q = exit_path_quiver(T, enumerate_strata(T, codim_bound))
    mq, sheaf = exit_morse_quiver(Q)
    c = sheaf_complex(mq, sheaf)
    c.fan = phi.target
    alpha = c.cells[0].index(Q.identity_stratum)
    return AugmentedComplex(c, alpha, phi, Q)


def unit_complex(f: StackyFan) -> LineBundleComplex:
    return LineBundleComplex(f.n_rays, {0: [(0,) * f.n_rays]}, {0: {}}, f, {0: [0]})


def tensor_resolutions(c1: LineBundleComplex, c2: LineBundleComplex) -> LineBundleComplex:
    """Graded tensor product over the product fan: d(a x b) = da x b + (-1)^|a| a x db."""
    n1, n2 = c1.nvars, c2.nvars
    nv = n1 + n2
    left = {i: i for i in range(n1)}
    right = {i: n1 + i for i in range(n2)}
    summands: dict[int, list] = {}
    index: dict[tuple, tuple[int, int]] = {}
    for p in c1.degrees():
        for q in c2.degrees():
            for i, a in enumerate(c1.summands[p]):
                for j, b in enumerate(c2.summands[q]):
                    lst = summands.setdefault(p + q, [])
                    index[(p, i, q, j)] = (p + q, len(lst))
                    lst.append(tuple(a) + tuple(b))
    diff: dict[int, Sparse] = {k: {} for k in summands}

    def add(k, row, col, poly):
        mat = diff[k]
        mat[(row, col)] = mat.get((row, col), Poly.zero(nv)) + poly

    for (p, i, q, j), (k, col) in index.items():
        for (r, cc), e in c1.differential.get(p, {}).items():
            if cc == i:
                add(k, index[(p - 1, r, q, j)][1], col, e.remap(nv, left))
        for (r, cc), e in c2.differential.get(q, {}).items():
            if cc == j:
                add(k, index[(p, i, q - 1, r)][1], col, e.remap(nv, right) * (-1) ** p)
    diff = {k: {key: v for key, v in m.items() if not v.is_zero()} for k, m in diff.items()}
    fan = product_stacky_fan(c1.fan, c2.fan) if c1.fan is not None and c2.fan is not None else None
    return LineBundleComplex(nv, summands, diff, fan)


def diagonal_resolution(f: StackyFan, codim_bound: int = DEFAULT_CODIM_BOUND) -> AugmentedComplex:
    from .fans import diagonal_morphism

    return build_resolution(diagonal_morphism(f), codim_bound)


# ---------------------------------------------------------------------------
# restriction to charts


@dataclass
class ChartRestriction:
    chart: StackyFan
    kept_rays: tuple[int, ...]
    restricted: LineBundleComplex
    reduced: LineBundleComplex
    reductions: list[MorseReductionResult]
    alpha: int
    target: StackyMorphism | None


def chart_fan(f: StackyFan, removed: Sequence[int]) -> tuple[StackyFan, tuple[int, ...]]:
    gone = set(removed)
    kept = tuple(i for i in range(f.n_rays) if i not in gone)
    pos = {r: i for i, r in enumerate(kept)}
    cones = [[pos[r] for r in sorted(c)] for c in f.maximal_cones if not (set(c) & gone)]
    names = [f.names[r] for r in kept] if f.names else None
    return StackyFan.build(f.rank_L, f.rank_N, f.beta, [f.rays[r] for r in kept], cones, names), kept


def restrict_to_chart(aug: AugmentedComplex, removed: Sequence[int]) -> ChartRestriction:
    """Pull back to the open set where the removed rays' divisors are deleted,
    then reduce along the rho-positive matching for each removed ray in turn."""
    if aug.quiver is None:
        raise ValueError("restriction needs the exit-path quiver of the complex")
    f = aug.complex.fan
    chart, kept = chart_fan(f, removed)
    pos = {r: i for i, r in enumerate(kept)}
    nv = len(kept)
    mq, sheaf = exit_morse_quiver(aug.quiver)
    morph = {e: p.substitute_one(removed).remap(nv, pos) for e, p in sheaf.morphisms.items()}
    objects = {v: tuple(d[r] for r in kept) for v, d in sheaf.objects.items()}
    cur_q, cur_f = mq, QuiverSheaf(objects, morph, nv)
    restricted = sheaf_complex(cur_q, cur_f)
    restricted.fan = chart
    reductions = []
    done: list[int] = []
    for ray in removed:
        if not any(aug.quiver.torus.ray_functionals[ray]):
            done.append(ray)
            continue
        match = rho_positive_matching(aug.quiver, ray, quiver=cur_q, removed=done)
        res = morse_reduce(cur_q, match.edges, cur_f)
        res.complex.fan = chart
        res.original.fan = chart
        reductions.append(res)
        cur_q, cur_f = res.quiver, res.sheaf
        done.append(ray)
    reduced = sheaf_complex(cur_q, cur_f)
    reduced.fan = chart
    alpha = reduced.cells[0].index(aug.quiver.identity_stratum)
    return ChartRestriction(chart, kept, restricted, reduced, reductions, alpha, aug.target)


def point_koszul_model(chart: StackyFan) -> LineBundleComplex:
    """Independent model for the identity point in a single-cone chart: the
    tensor product of the two-term complexes x_rho - 1, pushed forward along
    the finite quotient when beta restricted to the cone is not unimodular."""
    n = chart.n_rays
    if n != chart.rank_N or frozenset(range(n)) not in set(chart.cones):
        raise ToricError("NO_LOCAL_MODEL", "chart is not a single cone whose rays map to a basis of N_R")
    images = [list(img) for img in chart.ray_images]
    det = la.determinant(images)
    if det == 0:
        raise ToricError("NO_LOCAL_MODEL", "ray images are dependent")
    from .fans import variety_fan

    coord = variety_fan([[int(i == j) for j in range(n)] for i in range(n)], [list(range(n))],
                        list(chart.names) if chart.names else None)
    model = LineBundleComplex(0, {0: [()]}, {0: {}}, None)
    for _ in range(n):
        step = LineBundleComplex(1, {0: [(0,)], 1: [(-1,)]},
                                 {1: {(0, 0): Poly(1, {(1,): 1, (0,): -1})}}, None)
        model = tensor_resolutions(model, step)
    model.fan = coord
    if abs(det) == 1:
        return LineBundleComplex(model.nvars, model.summands, model.differential, chart)
    # unstabilized chart on the span of the cone: rays e_i, beta sends e_i to the ray images
    phi = LatticeMap.from_rows(la.transpose(images, n), n, n)
    base = StackyFan.build(n, n, phi, [[int(i == j) for j in range(n)] for i in range(n)], [list(range(n))],
                           list(chart.names) if chart.names else None)
    pi = StackyMorphism(coord, base, LatticeMap.identity(n), phi)
    blocks = [c for _, c in pushforward_finite_quotient_complex(model, pi)]
    out = direct_sum(blocks)
    return LineBundleComplex(out.nvars, out.summands, out.differential, chart)


def koszul_compare(r: ChartRestriction) -> bool:
    phi = r.target
    if phi is not None and phi.target.rank_N == phi.source.rank_N:
        model = unit_complex(r.chart)
    elif phi is None or phi.source.rank_N == 0:
        model = point_koszul_model(r.chart)
    else:
        raise ToricError("NO_LOCAL_MODEL", "local model is only known for points and torus factors")
    return isomorphic_up_to_signs(model, r.reduced)


# ---------------------------------------------------------------------------
# finite quotients


def _solve_translation(f: StackyFan, diff: Sequence[int]) -> tuple[int, ...]:
    n = la.solve_integer([list(img) for img in f.ray_images], list(diff))
    if n is None:
        raise ValueError("entry is not homogeneous")
    return tuple(n)


def pushforward_finite_quotient_complex(c: LineBundleComplex, pi: StackyMorphism) -> list[tuple[tuple[int, ...], LineBundleComplex]]:
    """Split pi_* C into connected blocks, one per character class.

    Summand (sigma, [m]) is O(Pi_*(F_sigma - beta^* m)); a monomial term x^e of
    an entry sigma -> tau with translation n (beta^* n = F_sigma - F_tau - e)
    joins (sigma, [m]) to (tau, [m - n]).
    """
    if "finite_quotient" not in classify_stacky_morphism(pi):
        raise ToricError("NOT_FINITE_QUOTIENT", "morphism is not a finite quotient")
    s, t = pi.source, pi.target
    perm = [t.ray_index(pi.Phi.apply(r)) for r in s.rays]
    nv = t.n_rays
    phi_rows = pi.phi.as_lists()
    hnf, piv = la.hermite_rows(phi_rows) if phi_rows and any(any(r) for r in phi_rows) else ([], [])

    def canon(m):
        return tuple(la.reduce_mod_rows(m, hnf, piv)) if hnf else tuple(m)

    from .core import cokernel_decomposition

    reps = [canon(m) for m in cokernel_decomposition(pi.phi.transpose(), True).representatives]
    nodes: dict[tuple, tuple[int, ...]] = {}
    for k in c.degrees():
        for i, d in enumerate(c.summands[k]):
            F = [-x for x in d]
            for m in reps:
                shifted = [a - b for a, b in zip(F, (la.dot(m, img) for img in s.ray_images))]
                div = [0] * nv
                for r, v in enumerate(shifted):
                    div[perm[r]] = -v
                nodes[(k, i, m)] = tuple(div)
    links: list[tuple[tuple, tuple, Poly]] = []
    for k, mat in c.differential.items():
        for (row, col), p in mat.items():
            Fs = [-x for x in c.summands[k][col]]
            Ft = [-x for x in c.summands[k - 1][row]]
            for exp, coef in p.terms.items():
                n = _solve_translation(s, [a - b - e for a, b, e in zip(Fs, Ft, exp)])
                term = Poly(nv, {tuple(exp[perm.index(j)] for j in range(nv)): coef})
                for m in reps:
                    links.append(((k, col, m), (k - 1, row, canon([x - y for x, y in zip(m, n)])), term))
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b, _ in links:
        parent[find(a)] = find(b)
    blocks: dict = {}
    for v in sorted(nodes):
        blocks.setdefault(find(v), []).append(v)
    out = []
    for root, members in blocks.items():
        idx: dict = {}
        summands: dict[int, list] = {}
        for v in members:
            lst = summands.setdefault(v[0], [])
            idx[v] = len(lst)
            lst.append(nodes[v])
        diff: dict[int, Sparse] = {k: {} for k in summands}
        for a, b, term in links:
            if a in idx and b in idx:
                key = (idx[b], idx[a])
                m = diff.setdefault(a[0], {})
                m[key] = m.get(key, Poly.zero(nv)) + term
        diff = {k: {key: v for key, v in mm.items() if not v.is_zero()} for k, mm in diff.items()}
        label = min(v[2] for v in members)
        out.append((label, LineBundleComplex(nv, summands, diff, t)))
    out.sort(key=lambda pair: pair[0])
    return out


# ---------------------------------------------------------------------------
# torus quotients and codimension-two extension


def pullback_torus_quotient_check(phi: StackyMorphism, quotient_phi: StackyMorphism, quotient_map: LatticeMap) -> bool:
    """Whether phi and its quotient phi/T produce the same exit-path data.

    ``quotient_map`` is N_X -> N_{X/T}. The exit torus of the quotient is
    transported into M_X by the dual map; both quivers are then built on that
    common basis and compared stratum by stratum and edge by edge.
    """
    k_x = kernel_saturated_basis(phi.phi.transpose())
    k_q = kernel_saturated_basis(quotient_phi.phi.transpose())
    lifted = [quotient_map.transpose().apply(b) for b in k_q]
    if la.hermite_rows([list(b) for b in k_x])[0] != la.hermite_rows([list(b) for b in lifted])[0]:
        return False
    if phi.target.rays != quotient_phi.target.rays:
        return False
    t1 = torus_from_basis(phi.target, lifted)
    t2 = torus_from_basis(quotient_phi.target, k_q)
    if t1.ray_functionals != t2.ray_functionals:
        return False
    q1 = exit_path_quiver(t1, enumerate_strata(t1))
    q2 = exit_path_quiver(t2, enumerate_strata(t2))
    same_strata = [(s.dim, s.sample, s.support) for s in q1.strata] == [(s.dim, s.sample, s.support) for s in q2.strata]
    return same_strata and q1.edges == q2.edges


def pullback_along_torus_quotient(c: LineBundleComplex, cover: StackyFan) -> LineBundleComplex:
    """Pullback along X -> X/T: same rays and Cox variables, so entries and
    divisor vectors are kept and only the ambient fan changes."""
    return LineBundleComplex(c.nvars, dict(c.summands), dict(c.differential), cover, c.cells)


def iflat_extend_complex(c: LineBundleComplex, inc: StackyMorphism) -> LineBundleComplex:
    """Extend support functions by 0 on new rays and keep every exponent."""
    s, t = inc.source, inc.target
    ray_map = []
    for r in s.rays:
        j = t.ray_index(inc.Phi.apply(r))
        if j is None:
            raise ToricError("NOT_EQUIV_CODIM_2", "a ray of the open subfan is not a ray of the ambient fan")
        ray_map.append(j)
    hit = set(ray_map)
    if inc.phi.as_lists() != LatticeMap.identity(t.rank_N).as_lists():
        raise ToricError("NOT_EQUIV_CODIM_2", "the inclusion changes N")
    for j, img in enumerate(t.ray_images):
        if j not in hit and any(img):
            raise ToricError("NOT_EQUIV_CODIM_2", f"ray {j} has nonzero image but is missing from the open subfan")
    for cone in s.cones:
        if frozenset(ray_map[i] for i in cone) not in set(t.cones):
            raise ToricError("NOT_EQUIV_CODIM_2", "a cone of the open subfan is not a cone of the ambient fan")
    nv = t.n_rays
    index = {i: j for i, j in enumerate(ray_map)}
    summands = {}
    for k, lst in c.summands.items():
        out = []
        for d in lst:
            v = [0] * nv
            for i, x in enumerate(d):
                v[ray_map[i]] = x
            out.append(tuple(v))
        summands[k] = out
    ext = c.map_entries(lambda p: p.remap(nv, index), nv)
    return LineBundleComplex(nv, summands, ext.differential, t, c.cells)


# ---------------------------------------------------------------------------
# fiber checks


@dataclass
class FiberReport:
    passed: bool
    trials: int
    on_y_trials: int
    violations: list = field(default_factory=list)


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 997), rng.randint(1, 997))


def _on_y(functionals: Sequence[Sequence[int]], point: Sequence[Fraction]) -> bool:
    c = len(functionals[0]) if functionals else 0
    for i in range(c):
        val = Fraction(1)
        for a, x in zip(functionals, point):
            val *= x ** a[i]
        if val != 1:
            return False
    return True


def fiber_exactness_check(aug: AugmentedComplex, trials: int = 100, seed: int = 0,
                          on_y_trials: int | None = None) -> FiberReport:
    """Evaluate the complex at random rational points of each chart.

    Chart-complement Cox variables are set to 1. Off Y the scalar complex must
    be exact. At points of Y, H_0 must be one-dimensional and H_i must have the
    Koszul dimension binom(c, i) of the fiber Tor groups.
    """
    c = aug.complex
    f = c.fan
    rng = random.Random(seed)
    if aug.quiver is not None:
        funcs = aug.quiver.torus.ray_functionals
    elif aug.target is not None:
        funcs = exit_torus(aug.target).ray_functionals
    else:
        funcs = ()
    codim = aug.codim
    charts = [sorted(cone) for cone in f.maximal_cones]
    if on_y_trials is None:
        on_y_trials = trials // 10
    report = FiberReport(True, trials, on_y_trials)
    for t in range(trials):
        cone = charts[t % len(charts)]
        on_y = t < on_y_trials
        point = [Fraction(1)] * f.n_rays
        if on_y:
            point = _random_point_on_y(funcs, cone, f.n_rays, rng)
        else:
            while True:
                for r in cone:
                    point[r] = _random_rational(rng)
                if not funcs or not _on_y(funcs, point):
                    break
        if funcs and _on_y(funcs, point):
            expect = {k: comb(codim, k) for k in c.degrees()}
        else:
            expect = {k: 0 for k in c.degrees()}
        got = c.homology_ranks(point)
        if got != expect:
            report.passed = False
            report.violations.append({"chart": cone, "point": [str(x) for x in point], "on_y": on_y,
                                      "homology": got, "expected": expect})
    return report


def _random_point_on_y(funcs, cone: Sequence[int], nrays: int, rng: random.Random) -> list[Fraction]:
    point = [Fraction(1)] * nrays
    c = len(funcs[0]) if funcs else 0
    if c == 0:
        for r in cone:
            point[r] = _random_rational(rng)
        return point
    sub = [[funcs[r][i] for r in cone] for i in range(c)]
    kernel = la.kernel_basis(sub, len(cone))
    params = [_random_rational(rng) for _ in kernel]
    for pos, r in enumerate(cone):
        val = Fraction(1)
        for s, v in zip(params, kernel):
            val *= s ** v[pos]
        point[r] = val
    signs = [p for p in iproduct((1, -1), repeat=len(cone))
             if all(sum(a for a, sg in zip(row, p) if sg < 0) % 2 == 0 for row in sub)]
    choice = signs[rng.randrange(len(signs))]
    for pos, r in enumerate(cone):
        point[r] *= choice[pos]
    return point
