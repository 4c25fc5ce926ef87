"""Algebraic discrete Morse theory on level-graded quivers with sheaf values.

A quiver edge is a triple ``(src, dst, tag)``; tags distinguish parallel edges
(for exit-path quivers the tag is the lattice translation of the target lift).
The value of an edge in the assembled complex is ``sign * morphism``.

Reduction follows the path-sum description: in the graph G_M every unmatched
edge a -> b keeps weight d(a->b) and every matched edge is reversed with weight
-1/d. Sums over directed paths between cells give the reduced differential,
the projection, the inclusion and the homotopy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .complexes import LineBundleComplex, Sparse, sparse_add, sparse_identity, sparse_matmul
from .errors import ToricError
from .poly import Poly

Edge = tuple  # (src, dst, tag)


@dataclass(frozen=True)
class MorseQuiver:
    levels: dict[Hashable, int]
    edges: tuple[Edge, ...]
    signs: dict[Edge, int] | None = None

    def vertices_at(self, k: int) -> list:
        return [v for v, lv in self.levels.items() if lv == k]


@dataclass(frozen=True)
class QuiverSheaf:
    objects: dict[Hashable, object]
    morphisms: dict[Edge, Poly]
    nvars: int = 0


@dataclass(frozen=True)
class AcyclicMatching:
    edges: frozenset

    def partner(self) -> dict:
        out = {}
        for s, t, _ in self.edges:
            out[s] = t
            out[t] = s
        return out


@dataclass
class MorseReductionResult:
    quiver: MorseQuiver
    sheaf: QuiverSheaf
    original: LineBundleComplex
    complex: LineBundleComplex
    projection: dict[int, Sparse]
    inclusion: dict[int, Sparse]
    homotopy: dict[int, Sparse]
    critical: dict[int, list] = field(default_factory=dict)


def _tag_add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return tuple(x + y for x, y in zip(a, b))


def _tag_neg(a):
    return None if a is None else tuple(-x for x in a)


def check_levels(q: MorseQuiver) -> None:
    for s, t, _ in q.edges:
        if q.levels[s] - q.levels[t] != 1:
            raise ValueError(f"edge {s}->{t} does not drop the level by one")


def edge_value(q: MorseQuiver, f: QuiverSheaf, e: Edge) -> Poly:
    if q.signs is None or e not in q.signs:
        raise ToricError("MISSING_ORIENTATION", f"edge {e} has no sign")
    return f.morphisms[e] * q.signs[e]


def sheaf_complex(q: MorseQuiver, f: QuiverSheaf) -> LineBundleComplex:
    """C_k = sum of F(v) over vertices of level k; entries are summed signed edge values."""
    check_levels(q)
    cells: dict[int, list] = {}
    for v, lv in q.levels.items():
        cells.setdefault(lv, []).append(v)
    index = {v: i for lv in cells for i, v in enumerate(cells[lv])}
    diff: dict[int, Sparse] = {k: {} for k in cells}
    for e in q.edges:
        s, t, _ = e
        key = (index[t], index[s])
        mat = diff[q.levels[s]]
        mat[key] = mat.get(key, Poly.zero(f.nvars)) + edge_value(q, f, e)
    diff = {k: {key: p for key, p in m.items() if not p.is_zero()} for k, m in diff.items()}
    return LineBundleComplex(f.nvars, {k: [f.objects[v] for v in vs] for k, vs in cells.items()}, diff,
                             cells={k: list(vs) for k, vs in cells.items()})


def validate_acyclic_matching(q: MorseQuiver, matching: Iterable[Edge]) -> bool:
    """Partial matching on vertices whose reversal leaves no directed cycle."""
    matched = set(matching)
    edge_set = set(q.edges)
    seen: set = set()
    for s, t, tag in matched:
        if (s, t, tag) not in edge_set or s in seen or t in seen:
            return False
        seen.update((s, t))
    adj: dict = {v: [] for v in q.levels}
    for e in q.edges:
        s, t, _ = e
        if e in matched:
            adj[t].append(s)
        else:
            adj[s].append(t)
    color = {v: 0 for v in q.levels}
    for root in q.levels:
        if color[root]:
            continue
        stack = [(root, iter(adj[root]))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = 2
                stack.pop()
            elif color[nxt] == 1:
                return False
            elif color[nxt] == 0:
                color[nxt] = 1
                stack.append((nxt, iter(adj[nxt])))
    return True


def gradient_flow_lines(q: MorseQuiver, matching: Iterable[Edge], src, dst) -> list[list[tuple[Edge, bool]]]:
    """All alternating paths src => dst: unmatched edges downward, matched edges
    traversed backwards. Each step is (edge, reversed)."""
    matched = set(matching)
    down: dict = {}
    up: dict = {}
    for e in q.edges:
        if e in matched:
            up[e[1]] = e
        else:
            down.setdefault(e[0], []).append(e)
    out: list = []

    def walk(v, path):
        for e in down.get(v, ()):
            t = e[1]
            step = path + [(e, False)]
            if t == dst:
                out.append(step)
            if t in up:
                m = up[t]
                walk(m[0], step + [(m, True)])

    walk(src, [])
    return out


def flow_line_value(q: MorseQuiver, f: QuiverSheaf, line: Sequence[tuple[Edge, bool]]) -> Poly:
    """Composite value with the sign (-1)^((len-1)/2) * product of edge signs."""
    value = Poly.const(f.nvars, 1)
    n_reversed = 0
    for e, rev in line:
        if rev:
            unit = f.morphisms[e].constant_value()
            value = value * (Fraction(1) / unit) * q.signs[e]
            n_reversed += 1
        else:
            value = value * f.morphisms[e] * q.signs[e]
    return value * (-1) ** n_reversed


class _Reducer:
    def __init__(self, q: MorseQuiver, f: QuiverSheaf, matched: set):
        self.q, self.f = q, f
        self.nvars = f.nvars
        self.matched = matched
        self.down: dict = {v: [] for v in q.levels}
        self.up: dict = {}
        for e in q.edges:
            w = edge_value(q, f, e)
            if e in matched:
                c = w.constant_value()
                self.up[e[1]] = (e[0], _tag_neg(e[2]), Poly.const(self.nvars, Fraction(-1) / c))
            else:
                self.down[e[0]].append((e[1], e[2], w))
        self.matched_up = {e[1] for e in matched}
        self.matched_down = {e[0] for e in matched}

    def _out(self, v, lo: int, hi: int):
        lv = self.q.levels[v]
        if lv == hi:
            for t, tag, w in self.down[v]:
                yield t, tag, w
        if lv == lo and v in self.up:
            yield self.up[v]

    def propagate(self, start, lo: int, hi: int) -> dict:
        """Path sums from start within levels lo..hi (hi = lo + 1), grouped by tag."""
        order = []
        state = {start: 0}
        stack = [(start, iter(list(self._out(start, lo, hi))))]
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                order.append(v)
                stack.pop()
                continue
            t = nxt[0]
            if t not in state:
                state[t] = 0
                stack.append((t, iter(list(self._out(t, lo, hi)))))
        order.reverse()
        acc: dict = {start: {None: Poly.const(self.nvars, 1)}}
        for v in order:
            here = acc.get(v)
            if not here:
                continue
            for t, tag, w in self._out(v, lo, hi):
                tgt = acc.setdefault(t, {})
                for tg, p in here.items():
                    key = _tag_add(tg, tag)
                    tgt[key] = tgt.get(key, Poly.zero(self.nvars)) + p * w
        return acc


def _collapse(d: dict, nvars: int) -> Poly:
    total = Poly.zero(nvars)
    for p in d.values():
        total = total + p
    return total


def morse_reduce(q: MorseQuiver, matching: Iterable[Edge], f: QuiverSheaf) -> MorseReductionResult:
    matched = set(matching)
    if not validate_acyclic_matching(q, matched):
        raise ValueError("matching is not an acyclic partial matching")
    original = sheaf_complex(q, f)
    for e in matched:
        s, t, _ = e
        total = Poly.zero(f.nvars)
        for e2 in q.edges:
            if e2[0] == s and e2[1] == t:
                total = total + edge_value(q, f, e2)
        if not total.is_unit() or total != edge_value(q, f, e):
            raise ToricError("MATCHING_NOT_RESPECTING", f"matched edge {s}->{t} is not a unit")
    red = _Reducer(q, f, matched)
    nv = f.nvars
    critical = {k: [v for v in vs if v not in red.matched_up and v not in red.matched_down]
                for k, vs in original.cells.items()}
    crit_set = {v for vs in critical.values() for v in vs}
    cidx = {v: i for vs in critical.values() for i, v in enumerate(vs)}
    oidx = {v: i for vs in original.cells.values() for i, v in enumerate(vs)}

    new_edges: list[Edge] = []
    new_morph: dict[Edge, Poly] = {}
    inclusion: dict[int, Sparse] = {k: {} for k in critical}
    projection: dict[int, Sparse] = {k: {} for k in critical}
    homotopy: dict[int, Sparse] = {k: {} for k in critical}
    for k, vs in critical.items():
        for c in vs:
            acc = red.propagate(c, k - 1, k)
            for v, by_tag in acc.items():
                lv = q.levels[v]
                if lv == k:
                    p = _collapse(by_tag, nv)
                    if not p.is_zero():
                        inclusion[k][(oidx[v], cidx[c])] = p
                elif v in crit_set:
                    for tag, p in sorted(by_tag.items(), key=lambda kv: (kv[0] is not None, kv[0] or ())):
                        if not p.is_zero():
                            e = (c, v, tag)
                            new_edges.append(e)
                            new_morph[e] = p
    for k, vs in original.cells.items():
        for x in vs:
            acc = red.propagate(x, k, k + 1)
            for v, by_tag in acc.items():
                p = _collapse(by_tag, nv)
                if p.is_zero():
                    continue
                if q.levels[v] == k and v in crit_set:
                    projection[k][(cidx[v], oidx[x])] = p
                elif q.levels[v] == k + 1 and v not in crit_set:
                    homotopy.setdefault(k, {})[(oidx[v], oidx[x])] = p
    rq = MorseQuiver({v: q.levels[v] for v in q.levels if v in crit_set}, tuple(new_edges),
                     {e: 1 for e in new_edges})
    rf = QuiverSheaf({v: f.objects[v] for v in rq.levels}, new_morph, nv)
    reduced = sheaf_complex(rq, rf)
    reduced.fan = original.fan
    return MorseReductionResult(rq, rf, original, reduced, projection, inclusion, homotopy, critical)


def verify_homotopy_data(r: MorseReductionResult) -> dict[str, bool]:
    """Exact checks: chain maps, p i = id, and i p - id = d H + H d."""
    c, cr = r.original, r.complex
    nv = c.nvars
    out = {"d_squared": True, "p_chain": True, "i_chain": True, "p_i_identity": True, "homotopy": True}
    degrees = sorted(set(c.summands) | set(cr.summands))
    for k in degrees:
        dk = cr.differential.get(k, {})
        if sparse_matmul(cr.differential.get(k - 1, {}), dk, nv):
            out["d_squared"] = False
        p_k, p_km1 = r.projection.get(k, {}), r.projection.get(k - 1, {})
        i_k, i_km1 = r.inclusion.get(k, {}), r.inclusion.get(k - 1, {})
        if sparse_add(sparse_matmul(dk, p_k, nv), sparse_matmul(p_km1, c.differential.get(k, {}), nv), nv, -1):
            out["p_chain"] = False
        if sparse_add(sparse_matmul(c.differential.get(k, {}), i_k, nv), sparse_matmul(i_km1, dk, nv), nv, -1):
            out["i_chain"] = False
        if sparse_add(sparse_matmul(p_k, i_k, nv), sparse_identity(cr.rank(k), nv), nv, -1):
            out["p_i_identity"] = False
        lhs = sparse_add(sparse_matmul(i_k, p_k, nv), sparse_identity(c.rank(k), nv), nv, -1)
        dh = sparse_matmul(c.differential.get(k + 1, {}), r.homotopy.get(k, {}), nv)
        hd = sparse_matmul(r.homotopy.get(k - 1, {}), c.differential.get(k, {}), nv)
        if sparse_add(lhs, sparse_add(dh, hd, nv), nv, -1):
            out["homotopy"] = False
    return out


# ---------------------------------------------------------------------------
# exit-path quivers


def exit_morse_quiver(Q) -> tuple[MorseQuiver, QuiverSheaf]:
    """The oriented Morse quiver of an exit-path quiver with its line-bundle sheaf.

    Vertices are stratum ids, tags are target lift translations and each edge
    carries the boundary monomial.
    """
    levels = {s.id: s.dim for s in Q.strata}
    edges = tuple((e.src, e.dst, e.dst_lift_translation) for e in Q.edges)
    signs = {(e.src, e.dst, e.dst_lift_translation): e.sign for e in Q.edges}
    morph = {(e.src, e.dst, e.dst_lift_translation): Poly.monomial(e.exponent) for e in Q.edges}
    objects = {s.id: tuple(-v for v in s.support.values) for s in Q.strata}
    nvars = Q.torus.fan.n_rays
    return MorseQuiver(levels, edges, signs), QuiverSheaf(objects, morph, nvars)


def rho_positive_matching(Q, ray: int, quiver: MorseQuiver | None = None,
                          removed: Iterable[int] = ()) -> AcyclicMatching:
    """Edges sigma -> tau + m with tau + m on the hyperplane of ray and sigma on
    its negative side, where sigma lies on every other current hyperplane
    through tau.

    ``quiver`` defaults to the exit-path quiver itself; after earlier reductions
    pass the reduced quiver, whose vertices are still stratum ids and whose
    tags are composite translations. ``removed`` lists rays already dropped.
    """
    T = Q.torus
    a = T.ray_functionals[ray]
    if not any(a):
        raise ToricError("RAY_INACTIVE", f"ray {ray} has zero functional on the exit torus")
    if quiver is None:
        quiver, _ = exit_morse_quiver(Q)
    strata = {s.id: s for s in Q.strata}
    current = set(T.active_rays) - set(removed) - {ray}
    chosen = []
    for e in quiver.edges:
        src, dst, m = e
        s, t = strata[src], strata[dst]
        if ray not in t.active or ray in s.active:
            continue
        level = sum(x * (y + z) for x, y, z in zip(a, t.sample, m))
        if not sum(x * y for x, y in zip(a, s.sample)) < level:
            continue
        if any(r in t.active and r not in s.active for r in current):
            continue
        chosen.append(e)
    return AcyclicMatching(frozenset(chosen))
