"""Stacky fans, their morphisms, support functions and divisor classes.

A stacky fan is a simplicial fan on a lattice L together with an integer map
beta: L -> N of finite cokernel. Everything is exact integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import lattice as la
from .errors import ToricError
from .exactlp import linprog


# ---------------------------------------------------------------------------
# lattice maps


@dataclass(frozen=True)
class LatticeMap:
    """Integer matrix with explicit shape, acting on column vectors."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("LatticeMap entries are not rectangular with the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], nrows: int | None = None, ncols: int | None = None):
        r = len(rows) if nrows is None else nrows
        c = (len(rows[0]) if rows else 0) if ncols is None else ncols
        if not rows:
            rows = [[0] * c for _ in range(r)]
        return cls(r, c, tuple(tuple(int(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "LatticeMap":
        return cls.from_rows(la.identity(n), n, n)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "LatticeMap":
        return cls.from_rows([], rows, cols)

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def apply(self, v: Sequence) -> tuple:
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def compose(self, other: "LatticeMap") -> "LatticeMap":
        """self after other."""
        if self.cols != other.rows:
            raise ValueError("shape mismatch in composition")
        return LatticeMap.from_rows(la.matmul(self.as_lists(), other.as_lists(), other.rows), self.rows, other.cols)

    def transpose(self) -> "LatticeMap":
        return LatticeMap.from_rows(la.transpose(self.as_lists(), self.rows), self.cols, self.rows)

    @cached_property
    def rank(self) -> int:
        return la.rank(self.entries) if self.rows and self.cols else 0

    def is_injective(self) -> bool:
        return self.rank == self.cols

    def has_torsion_free_cokernel(self) -> bool:
        diag = la.smith_diagonal(self.as_lists(), self.rows, self.cols) if self.rows and self.cols else []
        return all(d == 1 for d in diag)

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and (self.rows == 0 or abs(la.determinant(self.entries)) == 1)

    def block_sum(self, other: "LatticeMap") -> "LatticeMap":
        rows = [list(r) + [0] * other.cols for r in self.entries]
        rows += [[0] * self.cols + list(r) for r in other.entries]
        return LatticeMap.from_rows(rows, self.rows + other.rows, self.cols + other.cols)


def smith_normal_form(a: LatticeMap) -> tuple[LatticeMap, LatticeMap, LatticeMap]:
    """Return (U, D, V) with U A V = D, U and V unimodular, d_i | d_{i+1}."""
    u, d, v = la.smith_normal_form(a.as_lists(), a.rows, a.cols)
    return (LatticeMap.from_rows(u, a.rows, a.rows), LatticeMap.from_rows(d, a.rows, a.cols),
            LatticeMap.from_rows(v, a.cols, a.cols))


@dataclass(frozen=True)
class CokernelDecomposition:
    free_rank: int
    torsion: tuple[int, ...]
    representatives: tuple[tuple[int, ...], ...]


def cokernel_decomposition(a: LatticeMap, enumerate_representatives: bool | None = None) -> CokernelDecomposition:
    """Structure of Z^rows / A Z^cols.

    Representatives are enumerated when the cokernel is finite (or when asked
    for explicitly, which fails for an infinite cokernel).
    """
    u, d, _ = la.smith_normal_form(a.as_lists(), a.rows, a.cols)
    diag = [d[i][i] if i < a.cols else 0 for i in range(a.rows)]
    free_rank = sum(1 for x in diag if x == 0)
    torsion = tuple(x for x in diag if x > 1)
    if enumerate_representatives and free_rank:
        raise ToricError("REPRESENTATIVES_INFINITE", f"cokernel has free rank {free_rank}")
    reps: list[tuple[int, ...]] = []
    if free_rank == 0 and enumerate_representatives is not False:
        uinv = [[int(x) for x in row] for row in la.inverse_rational(u)] if a.rows else []
        hnf, piv = la.hermite_rows(la.transpose(a.as_lists(), a.rows)) if a.cols else ([], [])
        ranges = [range(x) if x > 1 else range(1) for x in diag]
        seen = set()
        for y in itertools.product(*ranges):
            x = la.matvec(uinv, y) if a.rows else []
            x = tuple(la.reduce_mod_rows(x, hnf, piv))
            seen.add(x)
        reps = sorted(seen)
    return CokernelDecomposition(free_rank, torsion, tuple(reps))


def kernel_saturated_basis(a: LatticeMap) -> list[tuple[int, ...]]:
    """Saturated basis of ker(A) in Hermite form; empty when A is injective."""
    if a.cols == 0:
        return []
    return [tuple(r) for r in la.kernel_basis(a.as_lists(), a.cols)]


def abelian_invariants(a: LatticeMap) -> tuple[int, tuple[int, ...]]:
    """(free rank, sorted prime-power elementary divisors) of coker(A)."""
    dec = cokernel_decomposition(a, enumerate_representatives=False)
    powers: list[int] = []
    for t in dec.torsion:
        n, p = t, 2
        while n > 1:
            if n % p == 0:
                q = 1
                while n % p == 0:
                    n //= p
                    q *= p
                powers.append(q)
            p += 1
    return dec.free_rank, tuple(sorted(powers))


# ---------------------------------------------------------------------------
# stacky fans


def _face_closure(cones: Iterable[Iterable[int]]) -> tuple[frozenset, ...]:
    out: set[frozenset] = set()
    for c in cones:
        c = frozenset(int(i) for i in c)
        for k in range(1, len(c) + 1):
            for sub in itertools.combinations(sorted(c), k):
                out.add(frozenset(sub))
    return tuple(sorted(out, key=lambda s: (len(s), sorted(s))))


@dataclass(frozen=True)
class StackyFan:
    """A simplicial fan on L (cones as ray-index sets) plus beta: L -> N."""

    rank_L: int
    rank_N: int
    beta: LatticeMap
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[frozenset, ...]
    names: tuple[str, ...] = field(default=(), compare=False)
    notes: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def build(cls, rank_L: int, rank_N: int, beta, rays, cones, names: Sequence[str] | None = None) -> "StackyFan":
        """Construct a fan, completing the face closure of the listed cones."""
        if not isinstance(beta, LatticeMap):
            beta = LatticeMap.from_rows(beta, rank_N, rank_L)
        rays_t = tuple(tuple(int(x) for x in r) for r in rays)
        listed = {frozenset(int(i) for i in c) for c in cones if len(c)}
        # every ray is a cone
        listed |= {frozenset([i]) for i in range(len(rays_t))}
        closed = _face_closure(listed)
        notes = ()
        if set(closed) != listed:
            notes = (f"face closure added {len(set(closed) - listed)} cone(s)",)
        names = tuple(names) if names else tuple(f"x{i}" for i in range(len(rays_t)))
        return cls(rank_L, rank_N, beta, rays_t, closed, names, notes)

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @cached_property
    def maximal_cones(self) -> tuple[frozenset, ...]:
        if not self.cones:
            return (frozenset(),)
        return tuple(c for c in self.cones if not any(c < d for d in self.cones))

    @cached_property
    def ray_images(self) -> tuple[tuple[int, ...], ...]:
        """beta(u_rho) for every ray."""
        return tuple(self.beta.apply(r) for r in self.rays)

    @cached_property
    def relation_rows(self) -> list[list[int]]:
        """Rows (<e_j, beta u_rho>)_rho spanning beta^* M inside Z^rays."""
        return [[img[j] for img in self.ray_images] for j in range(self.rank_N)]

    @cached_property
    def _pic_hermite(self) -> tuple[list[list[int]], list[int]]:
        if not self.n_rays:
            return [], []
        order = list(range(self.n_rays - 1, -1, -1))
        basis = la.hermite_rows(self.relation_rows)[0]
        r = len(basis)
        # pivot first on the trailing-most rays whose relation minor is a unit,
        # so the Hermite pivots are 1 whenever such a set of rays exists
        for cols in itertools.combinations(order, r):
            if r and abs(la.determinant([[row[c] for c in cols] for row in basis])) == 1:
                order = list(cols) + [c for c in order if c not in cols]
                break
        return la.hermite_rows(self.relation_rows, order)

    @cached_property
    def pic_is_free(self) -> bool:
        hnf, piv = self._pic_hermite
        return all(row[c] == 1 for row, c in zip(hnf, piv))

    @cached_property
    def pic_free_columns(self) -> tuple[int, ...]:
        """Ray indices whose divisors form a basis of Pic when Pic is free."""
        _, piv = self._pic_hermite
        return tuple(i for i in range(self.n_rays) if i not in piv)

    @cached_property
    def ray_images_span(self) -> bool:
        return self.rank_N == 0 or la.rank(self.ray_images) == self.rank_N

    def cone_rays(self, cone: Iterable[int]) -> list[tuple[int, ...]]:
        return [self.rays[i] for i in sorted(cone)]

    def contains(self, cone: Iterable[int], v: Sequence) -> bool:
        """Whether v lies in the (simplicial) cone."""
        gens = self.cone_rays(cone)
        if not gens:
            return all(x == 0 for x in v)
        coeffs = la.solve_rational(la.transpose(gens, self.rank_L), list(v))
        if coeffs is None:
            return False
        return all(c >= 0 for c in coeffs)

    def cone_coordinates(self, cone: Iterable[int], v: Sequence) -> dict[int, Fraction] | None:
        idx = sorted(cone)
        gens = [self.rays[i] for i in idx]
        if not gens:
            return {} if all(x == 0 for x in v) else None
        coeffs = la.solve_rational(la.transpose(gens, self.rank_L), list(v))
        if coeffs is None or any(c < 0 for c in coeffs):
            return None
        return dict(zip(idx, coeffs))

    def ray_index(self, v: Sequence[int]) -> int | None:
        try:
            return self.rays.index(tuple(v))
        except ValueError:
            return None


@dataclass(frozen=True)
class FanReport:
    valid: bool
    violations: tuple[str, ...]
    notes: tuple[str, ...]


def _cones_meet_properly(f: StackyFan, s: frozenset, t: frozenset) -> bool:
    """For simplicial s and t: s cap t equals the cone on their common rays."""
    shared = s & t
    only_s = sorted(s - shared)
    only_t = sorted(t - shared)
    if not only_s and not only_t:
        return True
    s_idx = sorted(s)
    t_idx = sorted(t)
    k = len(s_idx) + len(t_idx)
    # sum a_i u_i - sum b_j v_j = 0, 0 <= a, b <= 1; maximize mass on unshared rays
    a_eq = [[f.rays[i][d] for i in s_idx] + [-f.rays[j][d] for j in t_idx] for d in range(f.rank_L)]
    a_ub = []
    b_ub = []
    for v in range(k):
        a_ub.append([1 if w == v else 0 for w in range(k)])
        b_ub.append(1)
        a_ub.append([-1 if w == v else 0 for w in range(k)])
        b_ub.append(0)
    obj = [1 if i in only_s else 0 for i in s_idx] + [1 if j in only_t else 0 for j in t_idx]
    res = linprog(obj, a_ub, b_ub, a_eq, [0] * f.rank_L, nvars=k)
    return res.status == "optimal" and res.value == 0


def validate_stacky_fan(f: StackyFan) -> FanReport:
    """Check primitivity, simpliciality, face closure, cone compatibility and finiteness of coker(beta)."""
    bad: list[str] = []
    notes = list(f.notes)
    if f.beta.rows != f.rank_N or f.beta.cols != f.rank_L:
        bad.append(f"beta has shape {f.beta.rows}x{f.beta.cols}, expected {f.rank_N}x{f.rank_L}")
    for i, r in enumerate(f.rays):
        if len(r) != f.rank_L:
            bad.append(f"ray {i} has length {len(r)}, expected {f.rank_L}")
        elif not la.is_primitive(r):
            bad.append(f"ray {i} {list(r)} is not primitive")
    if bad:
        return FanReport(False, tuple(bad), tuple(notes))
    for c in f.cones:
        if any(i < 0 or i >= f.n_rays for i in c):
            bad.append(f"cone {sorted(c)} references a missing ray")
        elif la.rank(f.cone_rays(c)) != len(c):
            bad.append(f"cone {sorted(c)} is not simplicial (rays dependent)")
    if set(_face_closure(f.cones)) != set(f.cones):
        bad.append("cone list is not closed under faces")
    if not bad:
        maxl = f.maximal_cones
        for s, t in itertools.combinations(maxl, 2):
            if not _cones_meet_properly(f, s, t):
                bad.append(f"cones {sorted(s)} and {sorted(t)} overlap improperly")
    if f.beta.rank != f.rank_N:
        bad.append("coker(beta) is infinite")
    return FanReport(not bad, tuple(bad), tuple(notes))


def require_valid(f: StackyFan) -> None:
    rep = validate_stacky_fan(f)
    if not rep.valid:
        raise ToricError("INVALID_FAN", "; ".join(rep.violations))


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class StackyMorphism:
    """(phi, Phi): source -> target with beta_target Phi = phi beta_source."""

    source: StackyFan
    target: StackyFan
    Phi: LatticeMap
    phi: LatticeMap

    def check_diagram(self) -> None:
        s, t = self.source, self.target
        if (self.Phi.rows, self.Phi.cols) != (t.rank_L, s.rank_L) or (self.phi.rows, self.phi.cols) != (t.rank_N, s.rank_N):
            raise ToricError("INCOMPATIBLE_DIAGRAM", "matrix shapes do not match the fans")
        if t.beta.compose(self.Phi) != self.phi.compose(s.beta):
            raise ToricError("INCOMPATIBLE_DIAGRAM", "beta_target * Phi != phi * beta_source")


def preimage_cone(m: StackyMorphism, cone: frozenset) -> list[tuple[int, ...]] | None:
    """Primitive generators of Phi^{-1}(cone) for injective Phi.

    Returns None when Phi is not injective.
    """
    Phi = m.Phi
    if not Phi.is_injective():
        return None
    t = m.target
    gens = t.cone_rays(cone)
    if not gens or Phi.cols == 0:
        return []
    # equations of the image of Phi: w with w^T Phi = 0
    eqs = la.kernel_basis(la.transpose(Phi.as_lists(), Phi.rows), Phi.rows) if Phi.rows else []
    out: set[tuple[int, ...]] = set()
    k = len(gens)
    for size in range(1, k + 1):
        for sub in itertools.combinations(range(k), size):
            cols = [gens[i] for i in sub]
            if eqs:
                b = la.matmul(eqs, la.transpose(cols, Phi.rows), Phi.rows)
                ker = la.kernel_basis(b, size)
            else:
                ker = la.identity(size) if size == 1 else []
            if len(ker) != 1:
                continue
            vec = ker[0]
            if all(x > 0 for x in vec):
                pass
            elif all(x < 0 for x in vec):
                vec = [-x for x in vec]
            else:
                continue
            x = [sum(vec[j] * cols[j][d] for j in range(size)) for d in range(Phi.rows)]
            y = la.solve_rational(Phi.entries, x)
            if y is None:
                continue
            den = 1
            for q in y:
                den = la.lcm(den, q.denominator) if den else q.denominator
            yi = [int(q * den) for q in y]
            g = la.vec_gcd(yi)
            out.add(tuple(v // g for v in yi))
    return sorted(out)


def _source_cone_from_generators(src: StackyFan, gens: list[tuple[int, ...]]) -> frozenset | None:
    idx = []
    for g in gens:
        i = src.ray_index(g)
        if i is None:
            return None
        idx.append(i)
    return frozenset(idx)


def _is_inclusion(m: StackyMorphism) -> bool:
    if not (m.Phi.is_injective() and m.phi.is_injective()):
        return False
    if not (m.Phi.has_torsion_free_cokernel() and m.phi.has_torsion_free_cokernel()):
        return False
    pre = _preimage_cones(m)
    if pre is None:
        return False
    return all(c in pre for c in m.source.cones)


def _preimage_cones(m: StackyMorphism) -> set[frozenset] | None:
    out: set[frozenset] = set()
    for tau in m.target.cones:
        gens = preimage_cone(m, tau)
        if gens is None:
            return None
        c = _source_cone_from_generators(m.source, gens)
        out.add(c if c is not None else frozenset({-1}))
    return out


def _maps_fans_isomorphically(m: StackyMorphism) -> bool:
    if not m.Phi.is_unimodular():
        return False
    s, t = m.source, m.target
    if s.n_rays != t.n_rays:
        return False
    perm = [t.ray_index(m.Phi.apply(r)) for r in s.rays]
    if any(p is None for p in perm):
        return False
    return {frozenset(perm[i] for i in c) for c in s.cones} == set(t.cones)


def _finite_quotient_splits(m: StackyMorphism) -> bool:
    """Split test for f_pi via elementary divisors of the character groups.

    The dual of f_pi is the surjection coker(beta_t^*) -> coker(beta_s^*) whose
    kernel is M_s / pi^* M_t. For finitely generated abelian groups a short exact
    sequence splits iff the middle term is isomorphic to the direct sum.
    """
    s, t = m.source, m.target
    k_t = abelian_invariants(t.beta.transpose())
    k_s = abelian_invariants(s.beta.transpose())
    kern = abelian_invariants(m.phi.transpose())
    return k_t[0] == k_s[0] + kern[0] and tuple(sorted(k_s[1] + kern[1])) == k_t[1]


def _is_stabilization(m: StackyMorphism) -> bool:
    if not m.phi.is_unimodular():
        return False
    if not (m.Phi.is_injective() and m.Phi.has_torsion_free_cokernel()):
        return False
    s, t = m.source, m.target
    if s.n_rays != t.n_rays:
        return False
    perm = [t.ray_index(m.Phi.apply(r)) for r in s.rays]
    if any(p is None for p in perm):
        return False
    return {frozenset(perm[i] for i in c) for c in s.cones} == set(t.cones)


def classify_stacky_morphism(m: StackyMorphism) -> frozenset[str]:
    """Flags among inclusion, immersion, open_inclusion, change_of_group_finite_cokernel,
    finite_quotient and stabilization-equivalence."""
    m.check_diagram()
    flags: set[str] = set()
    if _is_inclusion(m):
        flags.add("inclusion")
        pre = _preimage_cones(m) or set()
        if pre - {frozenset()} == set(m.source.cones):
            flags.add("immersion")
        if m.Phi.is_unimodular() and m.phi.is_unimodular():
            flags.add("open_inclusion")
    if _maps_fans_isomorphically(m) and m.phi.is_injective() and m.phi.rank == m.phi.rows:
        flags.add("change_of_group_finite_cokernel")
        if _finite_quotient_splits(m):
            flags.add("finite_quotient")
    if _is_stabilization(m):
        flags.add("stabilization-equivalence")
    return frozenset(flags)


def _cone_is_smooth_chart(f: StackyFan, cone: frozenset) -> bool:
    rays = f.cone_rays(cone)
    if not rays:
        return True
    if la.rank(rays) != len(rays):
        return False
    if not all(d == 1 for d in la.smith_diagonal([list(r) for r in rays])):
        return False
    return la.rank([f.beta.apply(r) for r in rays]) == len(rays)


def smooth_stacky_chart_cover(f: StackyFan) -> list[StackyMorphism]:
    """One open inclusion per maximal cone whose source is a stabilized smooth coordinate fan."""
    charts = []
    for cone in f.maximal_cones:
        if not _cone_is_smooth_chart(f, cone):
            raise ToricError("NOT_SMOOTHLY_COVERED", f"maximal cone {sorted(cone)} is not a smooth stacky chart")
        idx = sorted(cone)
        src = StackyFan.build(f.rank_L, f.rank_N, f.beta, [f.rays[i] for i in idx], [list(range(len(idx)))],
                              [f.names[i] for i in idx])
        charts.append(StackyMorphism(src, f, LatticeMap.identity(f.rank_L), LatticeMap.identity(f.rank_N)))
    if not f.ray_images_span:
        raise ToricError("NOT_SMOOTHLY_COVERED", "ray images do not span N")
    return charts


# ---------------------------------------------------------------------------
# support functions and divisor classes


@dataclass(frozen=True)
class SupportFunction:
    """Integer values F(u_rho) on the rays of the ambient fan."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __sub__(self, other: "SupportFunction") -> "SupportFunction":
        return SupportFunction(tuple(a - b for a, b in zip(self.values, other.values)))

    def __add__(self, other: "SupportFunction") -> "SupportFunction":
        return SupportFunction(tuple(a + b for a, b in zip(self.values, other.values)))


@dataclass(frozen=True)
class DivisorClass:
    """Canonical representative of a divisor vector modulo beta^* M."""

    coefficients: tuple[int, ...]


@dataclass(frozen=True)
class MonomialSection:
    exponent: tuple[int, ...]
    coefficient: Fraction = Fraction(1)

    def __post_init__(self):
        if any(e < 0 for e in self.exponent):
            raise ValueError("monomial sections have non-negative exponents")


def divisor_of_support(F: SupportFunction) -> tuple[int, ...]:
    """D_F = sum of -F(u_rho) D_rho."""
    return tuple(-v for v in F.values)


def support_of_divisor(d: Sequence[int]) -> SupportFunction:
    return SupportFunction(tuple(-v for v in d))


def pic_canonical_form(d: Sequence[int], f: StackyFan) -> DivisorClass:
    """Hermite-reduced representative of d modulo the relation lattice of f.

    Pivots are taken from the last ray backwards, so the leading rays carry
    the free coordinates of the class.
    """
    hnf, piv = f._pic_hermite
    return DivisorClass(tuple(la.reduce_mod_rows(d, hnf, piv)))


def pic_coordinates(cls: DivisorClass, f: StackyFan) -> tuple[int, ...]:
    """Coordinates in the basis of free-column divisors; requires free Pic."""
    if not f.pic_is_free:
        raise ToricError("PIC_NOT_FREE", "Picard group has torsion")
    return tuple(cls.coefficients[i] for i in f.pic_free_columns)


def class_label(cls: DivisorClass, f: StackyFan) -> str:
    """Readable name such as O, O(-1) or O(-1,-2); falls back to divisor notation."""
    if f.pic_is_free:
        coords = pic_coordinates(cls, f)
        if all(c == 0 for c in coords):
            return "O"
        return "O(" + ",".join(str(c) for c in coords) + ")"
    terms = [f"{c}*D{i}" if c not in (1, -1) else ("-" if c < 0 else "") + f"D{i}"
             for i, c in enumerate(cls.coefficients) if c]
    return "O(" + "+".join(terms).replace("+-", "-") + ")" if terms else "O"


def class_of_support(F: SupportFunction, f: StackyFan) -> DivisorClass:
    return pic_canonical_form(divisor_of_support(F), f)


def beta_star(f: StackyFan, m: Sequence) -> tuple:
    """Values <m, beta u_rho> on every ray (m may be rational)."""
    return tuple(sum(Fraction(a) * b for a, b in zip(m, img)) if any(isinstance(x, Fraction) for x in m)
                 else sum(a * b for a, b in zip(m, img)) for img in f.ray_images)


def delta_beta_contains(F: SupportFunction, m: Sequence[int], f: StackyFan) -> bool:
    """m lies in Delta_beta(F): <beta^* m, u_rho> >= F(u_rho) on every ray."""
    return all(v >= F.values[i] for i, v in enumerate(beta_star(f, m)))


def pullback_support(m: StackyMorphism, F: SupportFunction) -> SupportFunction:
    """(Phi^* F)(u') = F(Phi u') using the piecewise-linear extension of F."""
    t = m.target
    out = []
    for r in m.source.rays:
        img = m.Phi.apply(r)
        value = None
        for cone in t.maximal_cones:
            coords = t.cone_coordinates(cone, img)
            if coords is not None:
                value = sum((c * F.values[i] for i, c in coords.items()), Fraction(0))
                break
        if value is None:
            raise ToricError("RAY_IMAGE_OUTSIDE_SUPPORT", f"Phi({list(r)}) = {list(img)} lies outside |Sigma|")
        if value.denominator != 1:
            raise ToricError("RAY_IMAGE_OUTSIDE_SUPPORT", f"F is not integral at Phi({list(r)})")
        out.append(int(value))
    return SupportFunction(tuple(out))


def pushforward_support_finite_quotient(m: StackyMorphism, F: SupportFunction) -> list[tuple[tuple[int, ...], SupportFunction]]:
    """Pairs ([m], Pi_*(F - beta^* m)) over coker(pi^*: M' -> M)."""
    if "finite_quotient" not in classify_stacky_morphism(m):
        raise ToricError("NOT_FINITE_QUOTIENT", "morphism is not a finite quotient")
    s, t = m.source, m.target
    perm = [t.ray_index(m.Phi.apply(r)) for r in s.rays]
    dec = cokernel_decomposition(m.phi.transpose())
    out = []
    for rep in dec.representatives:
        shifted = [F.values[i] - v for i, v in enumerate(beta_star(s, rep))]
        vals = [0] * t.n_rays
        for i, j in enumerate(perm):
            vals[j] = shifted[i]
        out.append((rep, SupportFunction(tuple(vals))))
    return out


# ---------------------------------------------------------------------------
# products


def product_stacky_fan(f1: StackyFan, f2: StackyFan) -> StackyFan:
    rays = [tuple(r) + (0,) * f2.rank_L for r in f1.rays] + [(0,) * f1.rank_L + tuple(r) for r in f2.rays]
    n1 = f1.n_rays
    cones = [set(a) | {n1 + j for j in b} for a in f1.maximal_cones for b in f2.maximal_cones]
    names = [f"{n}" for n in f1.names] + [f"{n}'" for n in f2.names]
    return StackyFan.build(f1.rank_L + f2.rank_L, f1.rank_N + f2.rank_N, f1.beta.block_sum(f2.beta), rays, cones, names)


def product_morphism(m1: StackyMorphism, m2: StackyMorphism) -> StackyMorphism:
    return StackyMorphism(product_stacky_fan(m1.source, m2.source), product_stacky_fan(m1.target, m2.target),
                          m1.Phi.block_sum(m2.Phi), m1.phi.block_sum(m2.phi))
