"""Complexes transcribed by hand from the worked examples, and the pipelines
that should reproduce them."""

from fractions import Fraction

from toricres.complexes import LineBundleComplex
from toricres.core import LatticeMap, StackyFan, StackyMorphism, product_stacky_fan
from toricres.fans import affine_space, orbifold_line, point_inclusion, projective_space, punctured_plane
from toricres.poly import Poly
from toricres.resolution import (build_resolution, diagonal_resolution, iflat_extend_complex,
                                 pullback_along_torus_quotient, pushforward_finite_quotient_complex)


def poly(nvars, *terms):
    """poly(3, (1, {0: 1}), (-1, {1: 1})) is x0 - x1."""
    out = {}
    for coef, powers in terms:
        e = [0] * nvars
        for i, p in powers.items():
            e[i] = p
        out[tuple(e)] = Fraction(coef)
    return Poly(nvars, out)


def complex_from_matrices(fan, summands, matrices):
    """matrices[k] is a dense list of rows (C_{k-1}) of columns (C_k)."""
    n = fan.n_rays
    diff = {k: {} for k in summands}
    for k, rows in matrices.items():
        for i, row in enumerate(rows):
            for j, p in enumerate(row):
                if p is not None and not p.is_zero():
                    diff[k][(i, j)] = p
    return LineBundleComplex(n, {k: [tuple(v) for v in vs] for k, vs in summands.items()}, diff, fan)


def x(n, i, c=1):
    return poly(n, (c, {i: 1}))


def one(n, c=1):
    return poly(n, (c, {}))


# ---------------------------------------------------------------------------
# points and diagonals


def golden_point_p1():
    f = projective_space(1)
    return complex_from_matrices(f, {0: [(0, 0)], 1: [(-1, 0)]},
                                 {1: [[poly(2, (1, {0: 1}), (-1, {1: 1}))]]})


def golden_point_p2():
    f = projective_space(2)
    n = 3

    def diff(i, j):
        return poly(n, (1, {i: 1}), (-1, {j: 1}))

    return complex_from_matrices(
        f, {0: [(0, 0, 0)], 1: [(-1, 0, 0)] * 3, 2: [(-2, 0, 0), (-1, 0, 0)]},
        {1: [[diff(0, 1), diff(1, 2), diff(2, 0)]],
         2: [[x(n, 2, -1), one(n)], [x(n, 0, -1), one(n)], [x(n, 1, -1), one(n)]]})


def golden_diagonal_p1():
    f = product_stacky_fan(projective_space(1), projective_space(1))
    # variables x0, x1, y0, y1
    return complex_from_matrices(f, {0: [(0,) * 4], 1: [(-1, 0, -1, 0)]},
                                 {1: [[poly(4, (1, {0: 1, 3: 1}), (-1, {1: 1, 2: 1}))]]})


def golden_diagonal_p2_unsigned():
    """The drawn diagonal resolution of P^2 x P^2, whose signs are not shown.
    Summand k of O(-1,-1)^3 carries x_k and y_k; its map to O is the binomial
    in the other two indices."""
    f = product_stacky_fan(projective_space(2), projective_space(2))
    n = 6
    d1 = []
    for k in range(3):
        i, j = [t for t in range(3) if t != k]
        d1.append(poly(n, (1, {i: 1, 3 + j: 1}), (1, {j: 1, 3 + i: 1})))
    d2 = [[x(n, k), x(n, 3 + k)] for k in range(3)]
    return complex_from_matrices(
        f, {0: [(0,) * 6], 1: [(-1, 0, 0, -1, 0, 0)] * 3, 2: [(-2, 0, 0, -1, 0, 0), (-1, 0, 0, -2, 0, 0)]},
        {1: [d1], 2: d2})


def unsigned(c):
    """Every coefficient replaced by its absolute value."""
    return c.map_entries(lambda p: Poly(p.nvars, {e: abs(v) for e, v in p.terms.items()}))


def resolution_point(f):
    return build_resolution(point_inclusion(f))


def resolution_diagonal(f):
    return diagonal_resolution(f)


# ---------------------------------------------------------------------------
# quotient pipelines


def orbifold_quotient():
    return StackyMorphism(affine_space(1), orbifold_line(2), LatticeMap.identity(1), LatticeMap.from_rows([[2]]))


def golden_point_orbifold_line():
    """O(-D1) + O -> O + O(-D1) with matrix [[x0, -1], [-1, x0]]."""
    f = orbifold_line(2)
    return complex_from_matrices(f, {0: [(0,), (-1,)], 1: [(-1,), (0,)]},
                                 {1: [[x(1, 0), one(1, -1)], [one(1, -1), x(1, 0)]]})


def pipeline_orbifold_line():
    """Push the point of A^1 forward along A^1 -> [A^1 / (Z/2)]."""
    aug = resolution_point(affine_space(1))
    return pushforward_finite_quotient_complex(aug.complex, orbifold_quotient())


def plane_quotient(row):
    """[A^2 minus 0 / T] for the one-dimensional torus with character row."""
    return StackyFan.build(2, 1, [list(row)], [[1, 0], [0, 1]], [[0], [1]], ["z0", "z1"])


def plane_extension():
    return StackyMorphism(punctured_plane(), affine_space(2), LatticeMap.identity(2), LatticeMap.identity(2))


def pipeline_plane_curve(row):
    """Resolve the point of the quotient, pull back to A^2 minus 0 and extend over 0."""
    aug = resolution_point(plane_quotient(row))
    pulled = pullback_along_torus_quotient(aug.complex, punctured_plane())
    return iflat_extend_complex(pulled, plane_extension())


def golden_parabola():
    """O + O -> O + O on A^2 with matrix [[z0, -z1], [-1, z0]]."""
    f = affine_space(2)
    return complex_from_matrices(f, {0: [(0, 0)] * 2, 1: [(0, 0)] * 2},
                                 {1: [[x(2, 0), x(2, 1, -1)], [one(2, -1), x(2, 0)]]})


def golden_hyperbola():
    f = affine_space(2)
    return complex_from_matrices(f, {0: [(0, 0)], 1: [(0, 0)]},
                                 {1: [[poly(2, (1, {0: 1, 1: 1}), (-1, {}))]]})


PARABOLA_ROW = (2, -1)
HYPERBOLA_ROW = (1, 1)
