"""Toric Frobenius pushforwards, zonotopes in real Picard space, line bundle
cohomology and the linear-inclusion obstruction to generation.

Divisors are coefficient vectors over the rays of the fan, D = sum a_rho D_rho.
Picard coordinates are those of ``pic_coordinates`` (free-column divisors).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from . import lattice as la
from .core import (DivisorClass, LatticeMap, StackyFan, StackyMorphism, beta_star, pic_canonical_form,
                   pic_coordinates)
from .errors import ToricError
from .exactlp import in_cone

# ---------------------------------------------------------------------------
# Frobenius pushforward


@dataclass(frozen=True)
class FrobDecomposition:
    """(F_ell)_* O(D) as a multiset of line bundle classes."""

    ell: int
    source: DivisorClass
    summands: dict = field(hash=False)

    @property
    def rank(self) -> int:
        return sum(self.summands.values())

    def classes(self) -> set[DivisorClass]:
        return set(self.summands)

    def multiplicity(self, e: DivisorClass) -> int:
        return self.summands.get(e, 0)


def frob_summand(f: StackyFan, d: Sequence[int], ell: int, m: Sequence[int]) -> tuple[int, ...]:
    """The divisor (floor((a_rho - <m, u_rho>) / ell))_rho."""
    return tuple((a - v) // ell for a, v in zip(d, beta_star(f, m)))


def frob_pushforward(f: StackyFan, d: Sequence[int], ell: int) -> FrobDecomposition:
    """Split (F_ell)_* O(D) by running m over the box {0, ..., ell-1}^rank_N."""
    if ell < 1:
        raise ValueError("ell must be positive")
    counts: Counter = Counter()
    for m in itertools.product(range(ell), repeat=f.rank_N):
        counts[pic_canonical_form(frob_summand(f, d, ell, m), f)] += 1
    return FrobDecomposition(ell, pic_canonical_form(d, f), dict(counts))


def arrangement_period(f: StackyFan) -> int:
    """lcm of the denominators of the vertices of the arrangement <m, u_rho> in Z."""
    n = f.rank_N
    period = 1
    imgs = f.ray_images
    for sub in itertools.combinations(range(len(imgs)), n):
        rows = [imgs[i] for i in sub]
        if n and la.determinant(rows) != 0:
            period = la.lcm(period, max(la.smith_diagonal([list(r) for r in rows])))
    return period


@dataclass(frozen=True)
class FrobSetCertificate:
    """How frob_set decided to stop: every ell in ``ells`` was scanned and the
    last ``window`` of them added no class."""

    period: int
    window: int
    ells: tuple[int, ...]
    new_per_round: tuple[int, ...]
    max_ell: int

    @property
    def horizon(self) -> int:
        return max(self.ells)

    @property
    def stable(self) -> bool:
        w = self.window
        return len(self.new_per_round) >= w and not any(self.new_per_round[-w:])


def frob_set(f: StackyFan, d: Sequence[int], max_ell: int | None = None) -> tuple[set[DivisorClass], FrobSetCertificate]:
    """Union of Frob_ell(D) over ell = 1, 2, ... until a full window of
    consecutive ell adds nothing.

    For large ell the summands near each arrangement vertex only depend on
    ell mod L (L the arrangement period), so the window is max(2, L). The scan
    runs at least to L * (sum |a_rho| + rank_N + 1) and stops at ``max_ell``;
    ``stable`` on the certificate records whether the window test passed.
    """
    period = arrangement_period(f)
    window = max(2, period)
    start = period * (sum(abs(a) for a in d) + f.rank_N + 1)
    if max_ell is None:
        max_ell = max(4 * start, start + 4 * window)
    cache: dict[tuple[int, ...], DivisorClass] = {}
    found: set[DivisorClass] = set()
    ells, new = [], []
    ell = 0
    while ell < max_ell:
        ell += 1
        before = len(found)
        for m in itertools.product(range(ell), repeat=f.rank_N):
            div = frob_summand(f, d, ell, m)
            cls = cache.get(div)
            if cls is None:
                cls = cache[div] = pic_canonical_form(div, f)
            found.add(cls)
        ells.append(ell)
        new.append(len(found) - before)
        if ell >= start and len(new) >= window and not any(new[-window:]):
            break
    return found, FrobSetCertificate(period, window, tuple(ells), tuple(new), max_ell)


# ---------------------------------------------------------------------------
# zonotope


def _primitive(v: Sequence) -> tuple[int, ...]:
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = la.lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints) if g else tuple(ints)


@dataclass(frozen=True)
class Zonotope:
    """Z = sum of segments [0, g_rho] in Pic_R, g_rho the class of -D_rho.

    ``facets`` are pairs (c, h) meaning c.x <= h; ``equations`` are pairs
    (k, 0) meaning k.x = 0 and only appear when Z is not full-dimensional.
    """

    dim: int
    generators: tuple[tuple[int, ...], ...]
    vertices: tuple[tuple[int, ...], ...]
    facets: tuple[tuple[tuple[int, ...], int], ...]
    equations: tuple[tuple[int, ...], ...]

    def contains(self, q: Sequence) -> bool:
        return (all(la.dot(k, q) == 0 for k in self.equations)
                and all(la.dot(c, q) <= h for c, h in self.facets))

    def tight_facets(self, q: Sequence) -> list[int]:
        return [i for i, (c, h) in enumerate(self.facets) if la.dot(c, q) == h]

    def interior_contains(self, q: Sequence) -> bool:
        return self.contains(q) and not self.tight_facets(q)

    def lattice_points(self) -> list[tuple[int, ...]]:
        if self.dim == 0:
            return [()]
        lo = [min(v[i] for v in self.vertices) for i in range(self.dim)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.dim)]
        return [p for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))) if self.contains(p)]


def zonotope_vertices(f: StackyFan) -> Zonotope:
    """The zonotope of f with exact vertex and facet descriptions."""
    if not f.pic_is_free:
        raise ToricError("PIC_NOT_FREE", "Picard group has torsion")
    gens = []
    for i in range(f.n_rays):
        e = [0] * f.n_rays
        e[i] = -1
        gens.append(pic_coordinates(pic_canonical_form(e, f), f))
    r = len(f.pic_free_columns)
    nonzero = [g for g in gens if any(g)]
    span_rank = la.rank(nonzero) if nonzero else 0
    equations = [tuple(k) for k in la.kernel_basis(nonzero, r)] if span_rank < r else []
    normals: set[tuple[int, ...]] = set()
    if span_rank == 0:
        pass
    else:
        for sub in itertools.combinations(nonzero, span_rank - 1):
            if sub and la.rank(list(sub)) < span_rank - 1:
                continue
            ker = la.kernel_basis([list(s) for s in sub] + [list(k) for k in equations], r)
            if len(ker) != 1:
                continue
            c = _primitive(ker[0])
            normals.add(c)
            normals.add(tuple(-x for x in c))
    facets = tuple(sorted((c, sum(max(0, la.dot(c, g)) for g in nonzero)) for c in normals))
    points = set()
    for choice in itertools.product((0, 1), repeat=len(nonzero)):
        points.add(tuple(sum(g[i] for g, t in zip(nonzero, choice) if t) for i in range(r)))
    vertices = []
    for p in sorted(points):
        tight = [c for c, h in facets if la.dot(c, p) == h]
        if span_rank == 0 or (tight and la.rank(tight) == span_rank):
            vertices.append(p)
    return Zonotope(r, tuple(gens), tuple(vertices), facets, tuple(equations))


@dataclass(frozen=True)
class StarFace:
    """The union of the relative interiors of the faces of Z containing p."""

    zonotope: Zonotope
    point: tuple

    def contains(self, q: Sequence) -> bool:
        if not self.zonotope.contains(q):
            return False
        facets = self.zonotope.facets
        return all(la.dot(facets[i][0], self.point) == facets[i][1] for i in self.zonotope.tight_facets(q))

    def lattice_points(self) -> list[tuple[int, ...]]:
        return [q for q in self.zonotope.lattice_points() if self.contains(q)]


def star_face_members(z: Zonotope, p: Sequence) -> StarFace:
    p = tuple(p)
    if not z.contains(p):
        raise ToricError("POINT_OUTSIDE_Z", f"{list(p)} is not in the zonotope")
    return StarFace(z, p)


def translated_cone_contains(z: Zonotope, p: Sequence, q: Sequence) -> bool:
    """Whether q lies in p + cone(p - Z)."""
    if not z.contains(p):
        raise ToricError("POINT_OUTSIDE_Z", f"{list(p)} is not in the zonotope")
    gens = [[Fraction(a) - b for a, b in zip(p, v)] for v in z.vertices]
    return in_cone(gens, [Fraction(a) - b for a, b in zip(q, p)])


# ---------------------------------------------------------------------------
# cohomology of line bundles


def _reduced_cohomology(faces: Sequence[frozenset]) -> dict[int, int]:
    """Reduced rational (co)homology ranks of a simplicial complex given by all
    its faces, the empty face included; degree -1 is the empty face."""
    by_dim: dict[int, list] = {}
    for s in faces:
        by_dim.setdefault(len(s) - 1, []).append(tuple(sorted(s)))
    index = {k: {s: i for i, s in enumerate(v)} for k, v in by_dim.items()}
    ranks = {}
    for k in by_dim:
        if k - 1 not in by_dim:
            ranks[k] = 0
            continue
        rows = [[0] * len(by_dim[k]) for _ in by_dim[k - 1]]
        for j, s in enumerate(by_dim[k]):
            for pos in range(len(s)):
                rows[index[k - 1][s[:pos] + s[pos + 1:]]][j] = (-1) ** pos
        ranks[k] = la.rank(rows)
    return {k: len(v) - ranks[k] - ranks.get(k + 1, 0) for k, v in by_dim.items()
            if len(v) - ranks[k] - ranks.get(k + 1, 0)}


@lru_cache(maxsize=None)
def _negative_support_cohomology(cones: tuple[frozenset, ...], negative: frozenset) -> tuple[tuple[int, int], ...]:
    faces = [c for c in cones if c <= negative] + [frozenset()]
    faces = list(dict.fromkeys(faces))
    return tuple(sorted((k + 1, v) for k, v in _reduced_cohomology(faces).items()))


def degree_box(f: StackyFan, d: Sequence[int]) -> list[tuple[int, int]]:
    """Bounding box of the vertices of the arrangement <m, u_rho> = -a_rho,
    inflated by one. Every degree carrying cohomology of a complete fan lies in it."""
    n = f.rank_N
    if n == 0:
        return []
    imgs = f.ray_images
    lo = [None] * n
    hi = [None] * n
    for sub in itertools.combinations(range(len(imgs)), n):
        rows = [imgs[i] for i in sub]
        if la.determinant(rows) == 0:
            continue
        v = la.solve_rational(rows, [-d[i] for i in sub])
        for j in range(n):
            a, b = la.frac_floor(v[j]), la.frac_ceil(v[j])
            lo[j] = a if lo[j] is None else min(lo[j], a)
            hi[j] = b if hi[j] is None else max(hi[j], b)
    if lo[0] is None:
        raise ToricError("NOT_COMPLETE", "ray images do not span; cohomology is not finite")
    return [(a - 1, b + 1) for a, b in zip(lo, hi)]


@dataclass(frozen=True)
class CohomologyResult:
    dims: dict = field(hash=False)
    witness: tuple | None = None
    witness_degree: int | None = None

    @property
    def nonzero(self) -> bool:
        return bool(self.dims)

    @property
    def total(self) -> int:
        return sum(self.dims.values())


def line_bundle_cohomology(f: StackyFan, d: Sequence[int], box: Sequence[tuple[int, int]] | None = None) -> CohomologyResult:
    """Degreewise H^i(O(D)): in degree m it is the reduced cohomology in degree
    i-1 of the subcomplex of cones whose rays satisfy <m, u_rho> < -a_rho."""
    need = degree_box(f, d)
    if box is None:
        box = need
    elif any(b0 > n0 or b1 < n1 for (b0, b1), (n0, n1) in zip(box, need)):
        raise ToricError("BOX_TOO_SMALL", f"degree box {list(box)} does not contain {need}")
    dims: Counter = Counter()
    witness = None
    for m in itertools.product(*(range(a, b + 1) for a, b in box)):
        neg = frozenset(i for i, v in enumerate(beta_star(f, m)) if v < -d[i])
        for i, v in _negative_support_cohomology(f.cones, neg):
            dims[i] += v
            if witness is None:
                witness = (tuple(m), i)
    return CohomologyResult(dict(sorted(dims.items())), witness[0] if witness else None,
                            witness[1] if witness else None)


def cohomology_nonvanishing(f: StackyFan, d: Sequence[int], box=None) -> tuple[bool, tuple | None]:
    """Whether some H^i(O(D)) is nonzero, with a witness (m, i)."""
    res = line_bundle_cohomology(f, d, box)
    return res.nonzero, ((res.witness, res.witness_degree) if res.nonzero else None)


# ---------------------------------------------------------------------------
# linear inclusions


def _subfan_is_complete(cones: list[frozenset], dim: int) -> bool:
    top = [c for c in cones if len(c) == dim]
    if dim == 0:
        return True
    if not top:
        return False
    counts: Counter = Counter()
    for c in top:
        for i in c:
            counts[c - {i}] += 1
    ridges = {c for c in cones if len(c) == dim - 1} | ({frozenset()} if dim == 1 else set())
    return all(counts[c] == 2 for c in ridges)


def linear_inclusions(f: StackyFan, max_rank: int | None = None) -> list[StackyMorphism]:
    """Linear inclusions Y -> X: subspaces spanned by rays whose subfan is
    complete in the subspace, the identity first and the identity point last."""
    n = f.rank_N
    seen: set[tuple] = set()
    found: list[tuple[int, tuple[int, ...], StackyMorphism]] = []
    for size in range(1, f.n_rays + 1):
        for sub in itertools.combinations(range(f.n_rays), size):
            span = [f.ray_images[i] for i in sub]
            d = la.rank(span)
            if d == n or (max_rank is not None and d > max_rank):
                continue
            perp = la.kernel_basis([list(r) for r in span], n)
            basis = la.kernel_basis(perp, n) if perp else la.identity(n)
            key = tuple(map(tuple, basis))
            if key in seen:
                continue
            seen.add(key)
            inside = [i for i in range(f.n_rays) if all(la.dot(k, f.ray_images[i]) == 0 for k in perp)]
            cones = [c for c in f.cones if c <= set(inside)]
            if not _subfan_is_complete(cones, d):
                continue
            found.append((d, tuple(inside), _inclusion_morphism(f, basis, inside, cones)))
    found.sort(key=lambda t: (-t[0], t[1]))
    return ([_inclusion_morphism(f, la.identity(n), list(range(f.n_rays)), list(f.cones))]
            + [m for _, _, m in found] + [_inclusion_morphism(f, [], [], [frozenset()])])


def _inclusion_morphism(f: StackyFan, basis, inside: list[int], cones) -> StackyMorphism:
    n, d = f.rank_N, len(basis)
    cols = la.transpose(basis, n) if d else [[] for _ in range(n)]
    rays = []
    for i in inside:
        coords = la.solve_rational(cols, list(f.ray_images[i]))
        rays.append([int(x) for x in coords])
    local = {i: j for j, i in enumerate(inside)}
    sub_cones = [[local[i] for i in c] for c in cones if c]
    names = [f.names[i] for i in inside]
    y = StackyFan.build(d, d, LatticeMap.identity(d), rays, sub_cones, names)
    emb = LatticeMap.from_rows(cols, n, d)
    return StackyMorphism(y, f, emb, emb)


def pullback_divisor(inc: StackyMorphism, d: Sequence[int]) -> tuple[int, ...]:
    """phi^* D: keep the coefficients of the rays of Y."""
    t = inc.target
    return tuple(d[t.ray_index(inc.Phi.apply(r))] for r in inc.source.rays)


# ---------------------------------------------------------------------------
# generation report


@dataclass(frozen=True)
class InclusionVerdict:
    inclusion: StackyMorphism
    dim: int
    pulled_back: tuple[int, ...]
    cohomology: CohomologyResult
    ell: int
    frobenius_dims: dict = field(hash=False)
    multiplicity_holds: bool

    @property
    def nonzero(self) -> bool:
        return self.cohomology.nonzero


@dataclass(frozen=True)
class GenerationReport:
    divisor: tuple[int, ...]
    verdicts: tuple[InclusionVerdict, ...]

    @property
    def unobstructed(self) -> bool:
        """Hom(O_Y, O(D)) is nonzero for every linear inclusion Y."""
        return all(v.nonzero for v in self.verdicts)

    @property
    def obstructions(self) -> list[InclusionVerdict]:
        return [v for v in self.verdicts if not v.nonzero]


def frobenius_hom_dims(inc: StackyMorphism, d: Sequence[int], ell: int) -> dict[int, int]:
    """Graded dimensions of Hom(O_Y, (F_ell)_* O(D)) summand by summand."""
    total: Counter = Counter()
    dec = frob_pushforward(inc.target, d, ell)
    for e, mult in dec.summands.items():
        for i, v in line_bundle_cohomology(inc.source, pullback_divisor(inc, e.coefficients)).dims.items():
            total[i] += mult * v
    return dict(sorted(total.items()))


def generation_report(f: StackyFan, d: Sequence[int], ell: int = 2, max_rank: int | None = None) -> GenerationReport:
    """Decide Hom(O_Y, O(D)) != 0 for every linear inclusion and check the
    ell^codim multiplicity identity for the Frobenius pushforward."""
    d = tuple(d)
    verdicts = []
    for inc in linear_inclusions(f, max_rank):
        y = inc.source
        pulled = pullback_divisor(inc, d)
        coh = line_bundle_cohomology(y, pulled)
        fdims = frobenius_hom_dims(inc, d, ell)
        k = f.rank_N - y.rank_N
        holds = fdims == {i: v * ell ** k for i, v in coh.dims.items()}
        verdicts.append(InclusionVerdict(inc, y.rank_N, pulled, coh, ell, fdims, holds))
    return GenerationReport(d, tuple(verdicts))
