import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import goldens as g
from fangen import random_smooth_complete_fan, random_substack
from toricres.complexes import check_d_squared, homogeneity_violations, isomorphic_up_to_signs
from toricres.core import LatticeMap, StackyFan, StackyMorphism, smooth_stacky_chart_cover
from toricres.errors import ToricError
from toricres.fans import (affine_space, hirzebruch, orbifold_line, point_inclusion,
                           projective_space, punctured_plane, weighted_projective_line_stack)
from toricres.poly import Poly
from toricres.resolution import (build_resolution, fiber_exactness_check, iflat_extend_complex, koszul_compare,
                                 point_koszul_model, pullback_torus_quotient_check, pushforward_finite_quotient_complex,
                                 restrict_to_chart,
                                 tensor_resolutions)


def perturbed(c, k=1):
    """Same shape, one entry of d_k multiplied by 2."""
    key = sorted(c.differential[k])[0]
    diff = {j: dict(m) for j, m in c.differential.items()}
    diff[k][key] = diff[k][key] * Poly.const(c.nvars, 2)
    return type(c)(c.nvars, c.summands, diff, c.fan)


def test_point_resolutions_match_goldens():
    assert isomorphic_up_to_signs(g.resolution_point(projective_space(1)).complex, g.golden_point_p1())
    assert isomorphic_up_to_signs(g.resolution_point(projective_space(2)).complex, g.golden_point_p2())


def test_diagonal_resolutions_match_goldens():
    assert isomorphic_up_to_signs(g.resolution_diagonal(projective_space(1)).complex, g.golden_diagonal_p1())
    ours = g.unsigned(g.resolution_diagonal(projective_space(2)).complex)
    assert isomorphic_up_to_signs(ours, g.golden_diagonal_p2_unsigned())


def test_comparison_rejects_altered_goldens():
    ours = g.resolution_point(projective_space(2)).complex
    assert not isomorphic_up_to_signs(ours, perturbed(g.golden_point_p2(), 1))
    assert not isomorphic_up_to_signs(ours, perturbed(g.golden_point_p2(), 2))
    assert not isomorphic_up_to_signs(g.resolution_point(projective_space(1)).complex, g.golden_point_p2())


def test_point_resolution_of_p2_is_exact_off_the_point():
    aug = g.resolution_point(projective_space(2))
    assert aug.complex.ranks() == {0: 1, 1: 3, 2: 2}
    assert check_d_squared(aug.complex) and not homogeneity_violations(aug.complex)


def test_orbifold_line_pushforward_is_one_block():
    blocks = g.pipeline_orbifold_line()
    assert len(blocks) == 1
    assert isomorphic_up_to_signs(blocks[0][1], g.golden_point_orbifold_line())


def test_plane_curves():
    assert isomorphic_up_to_signs(g.pipeline_plane_curve(g.PARABOLA_ROW), g.golden_parabola())
    hyper = g.pipeline_plane_curve(g.HYPERBOLA_ROW)
    assert check_d_squared(hyper) and hyper.ranks() == {0: 1, 1: 1}


def test_pushforward_requires_a_finite_quotient():
    aug = g.resolution_point(projective_space(1))
    with pytest.raises(ToricError) as err:
        pushforward_finite_quotient_complex(aug.complex, point_inclusion(projective_space(1)))
    assert err.value.code == "NOT_FINITE_QUOTIENT"


def test_iflat_extension_errors():
    c = g.resolution_point(g.plane_quotient(g.PARABOLA_ROW)).complex
    scaled = StackyMorphism(punctured_plane(), affine_space(2), LatticeMap.identity(2),
                            LatticeMap.from_rows([[2, 0], [0, 1]]))
    with pytest.raises(ToricError) as err:
        iflat_extend_complex(c, scaled)
    assert err.value.code == "NOT_EQUIV_CODIM_2"
    # the affine line is missing the ray e_1 of A^2
    line_in_plane = StackyMorphism(affine_space(1), affine_space(2), LatticeMap.from_rows([[1], [0]]),
                                   LatticeMap.from_rows([[1], [0]]))
    with pytest.raises(ToricError) as err:
        iflat_extend_complex(g.resolution_point(affine_space(1)).complex, line_in_plane)
    assert err.value.code == "NOT_EQUIV_CODIM_2"


@pytest.mark.parametrize("f", [projective_space(1), projective_space(2), hirzebruch(1),
                               weighted_projective_line_stack()], ids=["P1", "P2", "F1", "P(1,2)"])
def test_every_chart_restricts_to_the_koszul_model(f):
    aug = g.resolution_point(f)
    n = f.n_rays
    for cone in f.maximal_cones:
        r = restrict_to_chart(aug, [i for i in range(n) if i not in cone])
        assert koszul_compare(r)
        assert r.reduced.ranks() == {k: comb(f.rank_N, k) * len(r.reduced.summands[0])
                                     for k in range(f.rank_N + 1)}


def test_koszul_model_of_a_stacky_chart():
    f = weighted_projective_line_stack()
    charts = smooth_stacky_chart_cover(f)
    sizes = sorted(len(point_koszul_model(c.source).summands[0]) for c in charts)
    # the orbifold chart of P(1, 2) carries two characters
    assert sizes == [1, 2]


def test_fiber_check_passes_on_resolutions():
    for f in (projective_space(1), projective_space(2), hirzebruch(2), orbifold_line(3)):
        report = fiber_exactness_check(g.resolution_point(f), trials=40, seed=0)
        assert report.passed, report.violations


def test_fiber_check_catches_a_broken_complex():
    aug = g.resolution_point(projective_space(2))
    broken = type(aug)(perturbed(aug.complex, 2), aug.alpha, aug.target, aug.quiver)
    assert not fiber_exactness_check(broken, trials=40, seed=0).passed


def test_tensor_product_of_resolutions():
    a = g.resolution_point(projective_space(1)).complex
    b = g.resolution_point(projective_space(2)).complex
    t = tensor_resolutions(a, b)
    assert check_d_squared(t)
    assert sum(t.ranks().values()) == sum(a.ranks().values()) * sum(b.ranks().values())
    assert t.ranks() == {0: 1, 1: 4, 2: 5, 3: 2}


@given(st.integers(0, 2 ** 31))
@settings(max_examples=15, deadline=None)
def test_random_resolutions_are_homogeneous_complexes(seed):
    rng = random.Random(seed)
    f = random_smooth_complete_fan(rng, dim=2)
    aug = build_resolution(random_substack(rng, f))
    assert check_d_squared(aug.complex)
    assert not homogeneity_violations(aug.complex)
    assert aug.complex.length() == aug.codim


def test_torus_quotient_pullback_check():
    # the orbit of the (1, 2) subtorus in A^2 minus 0 lies over the point of the quotient by (2, -1)
    torus = StackyFan.build(0, 1, LatticeMap.zero(1, 0), [], [])
    quotient_map = LatticeMap.from_rows([[2, -1]])
    point = point_inclusion(g.plane_quotient(g.PARABOLA_ROW))

    def orbit(direction):
        return StackyMorphism(torus, punctured_plane(), LatticeMap.zero(2, 0), LatticeMap.from_rows(direction))

    assert pullback_torus_quotient_check(orbit([[1], [2]]), point, quotient_map)
    assert not pullback_torus_quotient_check(orbit([[1], [1]]), point, quotient_map)
