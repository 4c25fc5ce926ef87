import itertools
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from toricres import lattice as la
from toricres.exactlp import feasible, in_cone, linprog
from toricres.poly import Poly

exponents = st.lists(st.integers(0, 3), min_size=3, max_size=3).map(tuple)
polys = st.dictionaries(exponents, st.integers(-5, 5), max_size=4).map(lambda d: Poly(3, d))
points = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=7), min_size=3, max_size=3)


def test_poly_basics():
    x0 = Poly.monomial((1, 0))
    x1 = Poly.monomial((0, 1))
    p = x0 - x1
    assert p.to_str(["a", "b"]) == "a - b"
    assert (p * p).evaluate([2, 1]) == 1
    assert Poly.const(2, -1).is_unit() and not p.is_unit()
    assert (p - p).is_zero()
    assert p.substitute_one([0]) == Poly.const(2, 1) - x1
    assert x0.remap(3, {0: 2, 1: 0}) == Poly.monomial((0, 0, 1))


@given(polys, polys, points)
@settings(max_examples=100, deadline=None)
def test_evaluation_is_a_ring_map(p, q, pt):
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (-p).evaluate(pt) == -p.evaluate(pt)


@given(polys, polys, polys)
@settings(max_examples=60, deadline=None)
def test_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)


@given(polys, points)
@settings(max_examples=60, deadline=None)
def test_substitute_one_matches_evaluation(p, pt):
    pt = list(pt)
    pt[1] = Fraction(1)
    assert p.substitute_one([1]).evaluate(pt) == p.evaluate(pt)


# ---------------------------------------------------------------------------
# exact LPs against vertex enumeration


def vertex_max(c, a, b):
    """Maximum of c.x over {a x <= b} in the plane, by enumerating vertices."""
    best = None
    for i, j in itertools.combinations(range(len(a)), 2):
        m = [a[i], a[j]]
        if la.determinant(m) == 0:
            continue
        x = la.solve_rational(m, [b[i], b[j]])
        if all(sum(Fraction(r[k]) * x[k] for k in range(2)) <= bb for r, bb in zip(a, b)):
            v = Fraction(c[0]) * x[0] + Fraction(c[1]) * x[1]
            best = v if best is None else max(best, v)
    return best


box = [[1, 0], [-1, 0], [0, 1], [0, -1]]
rows = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-6, 6)), max_size=4)


@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), rows)
@settings(max_examples=100, deadline=None)
def test_linprog_matches_vertex_enumeration(c, extra):
    a = box + [[r[0], r[1]] for r in extra]
    b = [5, 5, 5, 5] + [r[2] for r in extra]
    res = linprog(list(c), a, b)
    want = vertex_max(c, a, b)
    if want is None:
        assert res.status == "infeasible"
    else:
        assert res.status == "optimal" and res.value == want
        assert all(sum(Fraction(r[k]) * res.x[k] for k in range(2)) <= bb for r, bb in zip(a, b))


def test_linprog_unbounded_and_equalities():
    assert linprog([1, 0], [[0, 1]], [1]).status == "unbounded"
    res = linprog([1, 1], [[1, 0]], [2], [[1, -1]], [0])
    assert res.status == "optimal" and res.value == 4
    assert not feasible([[1]], [-1], [[1]], [0], nvars=1)


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4),
       st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
@settings(max_examples=100, deadline=None)
def test_in_cone_matches_planar_caratheodory(gens, p):
    # in the plane a point of a cone lies in the cone of at most two generators
    def in_pair(g, h):
        m = la.transpose([g, h], 2)
        if la.determinant(m) != 0:
            x = la.solve_rational(m, p)
            return all(v >= 0 for v in x)
        return in_single(g) or in_single(h)

    def in_single(g):
        if not any(g):
            return not any(p)
        x = la.solve_rational(la.transpose([g], 2), p)
        return x is not None and x[0] >= 0

    want = not any(p) or any(in_single(g) for g in gens) or any(in_pair(g, h) for g, h in itertools.combinations(gens, 2))
    assert in_cone([list(g) for g in gens], list(p)) == want
