import itertools
import math
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fangen import random_smooth_complete_fan, random_substack
from toricres import lattice as la
from toricres.core import pic_canonical_form
from toricres.errors import ToricError
from toricres.fans import (diagonal_morphism, hirzebruch, point_inclusion, projective_space,
                           weighted_projective_line_stack)
from toricres.frobenius import arrangement_period
from toricres.strat import (bondal_support, enumerate_strata, exit_torus, point_in_torus, random_interior_point,
                            stratify, thomsen_collection)


def level_code(x):
    return 2 * x.numerator // x.denominator if x.denominator == 1 else 2 * math.floor(x) + 1


def brute_force_strata(T, K):
    """Strata of the torus by dimension, from the grid (1/K) Z^c.

    Grid points are keyed by their level vector; keys that differ by a lattice
    translation (checked for shifts in {-3, ..., 3}^c) are the same stratum.
    """
    c = T.codim
    funcs = [T.ray_functionals[r] for r in T.active_rays]
    keys = {}
    for z in itertools.product(range(K), repeat=c):
        w = [Fraction(v, K) for v in z]
        key = tuple(level_code(sum(a * x for a, x in zip(f, w))) for f in funcs)
        eq = [list(f) for f, k in zip(funcs, key) if k % 2 == 0]
        keys[key] = c - (la.rank(eq) if eq else 0)
    parent = {k: k for k in keys}

    def find(k):
        while parent[k] != k:
            k = parent[k]
        return k

    for key in keys:
        for n in itertools.product(range(-3, 4), repeat=c):
            shifted = tuple(k + 2 * sum(a * b for a, b in zip(f, n)) for f, k in zip(funcs, key))
            if shifted in keys:
                parent[find(shifted)] = find(key)
    return Counter(keys[k] for k in keys if find(k) == k)


def grid_thomsen(f, K):
    n = f.rank_N
    ceilings = set()
    for z in itertools.product(range(K), repeat=n):
        m = [Fraction(v, K) for v in z]
        ceilings.add(tuple(math.ceil(sum(a * b for a, b in zip(m, img))) for img in f.ray_images))
    return {pic_canonical_form([-v for v in c], f) for c in ceilings}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_thomsen_collection_of_projective_space(n):
    f = projective_space(n)
    assert thomsen_collection(f) == {pic_canonical_form((-k,) + (0,) * n, f) for k in range(n + 1)}


def test_thomsen_collection_matches_grid_sampling():
    rng = random.Random(3)
    fans = [hirzebruch(1), hirzebruch(3), projective_space(3)]
    while len(fans) < 7:
        f = random_smooth_complete_fan(rng, dim=2)
        if arrangement_period(f) <= 12:
            fans.append(f)
    for f in fans:
        K = 6 * arrangement_period(f)
        assert thomsen_collection(f) == grid_thomsen(f, K)


def test_p2_point_strata():
    T = exit_torus(point_inclusion(projective_space(2)))
    counts = Counter(s.dim for s in enumerate_strata(T))
    # three lines meeting in one point, cutting the torus into two triangles
    assert counts == Counter({0: 1, 1: 3, 2: 2})


def test_strata_match_brute_force_for_small_codimension():
    rng = random.Random(5)
    cases = [point_inclusion(projective_space(1)), point_inclusion(projective_space(2)),
             diagonal_morphism(projective_space(2)), point_inclusion(weighted_projective_line_stack())]
    for _ in range(8):
        f = random_smooth_complete_fan(rng, dim=2)
        cases.append(random_substack(rng, f))
    for phi in cases:
        T = exit_torus(phi)
        if T.codim == 0 or T.codim > 2:
            continue
        want = brute_force_strata(T, 12 * arrangement_period(phi.target))
        assert Counter(s.dim for s in enumerate_strata(T)) == want


@given(st.integers(0, 2 ** 31))
@settings(max_examples=30, deadline=None)
def test_euler_characteristic_of_torus_is_zero(seed):
    rng = random.Random(seed)
    f = random_smooth_complete_fan(rng)
    phi = random_substack(rng, f)
    q = stratify(phi)
    assert sum((-1) ** s.dim for s in q.strata) == 0
    assert sum(1 for s in q.strata if s.dim == 0) >= 1


@given(st.integers(0, 2 ** 31))
@settings(max_examples=20, deadline=None)
def test_stratum_bundles_are_bondal_classes(seed):
    rng = random.Random(seed)
    f = random_smooth_complete_fan(rng, dim=2)
    q = stratify(point_inclusion(f))
    for s in q.strata:
        w = random_interior_point(s, rng)
        m = point_in_torus(q.torus, w)
        support = bondal_support(f, m)
        assert pic_canonical_form([-v for v in support.values], f) == s.bundle


def test_identity_stratum_is_the_trivial_bundle():
    f = hirzebruch(2)
    q = stratify(point_inclusion(f))
    ident = next(s for s in q.strata if s.id == q.identity_stratum)
    assert ident.dim == 0 and all(v == 0 for v in ident.bundle.coefficients)


def test_edges_go_down_one_dimension():
    q = stratify(point_inclusion(projective_space(2)))
    dims = {s.id: s.dim for s in q.strata}
    assert all(dims[e.src] == dims[e.dst] + 1 for e in q.edges)
    assert all(min(e.exponent) >= 0 for e in q.edges)
    # each triangle has three sides
    assert Counter(e.src for e in q.edges if dims[e.src] == 2) == Counter({s: 3 for s in dims if dims[s] == 2})


def test_codimension_limit():
    with pytest.raises(ToricError) as err:
        stratify(point_inclusion(projective_space(5)))
    assert err.value.code == "CODIM_LIMIT"
    assert len(stratify(point_inclusion(projective_space(5)), codim_bound=5).strata) > 0


def test_bondal_support_takes_ceilings():
    f = projective_space(2)
    assert bondal_support(f, (Fraction(1, 2), Fraction(-1, 3))).values == (1, 0, 0)
