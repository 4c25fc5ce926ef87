"""Two ways of getting resolutions from quotients.

A finite quotient: the point of A^1 pushed forward to [A^1 / (Z/2)].
A torus quotient: a point of [A^2 minus 0 / C*] pulled back to A^2 minus 0
and extended over the origin, giving the parabola z1 = z0^2 or the
hyperbola z0 z1 = 1 depending on the weights of C*.

Run: python3 demos/quotients.py
"""

from toricres import build_resolution, class_label
from toricres.core import LatticeMap, StackyFan, StackyMorphism
from toricres.fans import affine_space, orbifold_line, point_inclusion, punctured_plane
from toricres.resolution import (iflat_extend_complex, pullback_along_torus_quotient,
                                 pushforward_finite_quotient_complex)


def show(title, c):
    print(f"== {title}")
    names = list(c.fan.names) if c.fan.names else [f"x{i}" for i in range(c.nvars)]
    for k in c.degrees():
        print(f"  C_{k}: " + " + ".join(class_label(t, c.fan) for t in c.terms(k)))
    for k in sorted(c.differential):
        if k - 1 not in c.summands:
            continue
        print(f"  d_{k}:")
        rows = len(c.summands[k - 1])
        cols = len(c.summands[k])
        for i in range(rows):
            print("   [" + ", ".join(c.entry(k, i, j).to_str(names) for j in range(cols)) + "]")


def orbifold_point():
    quotient = StackyMorphism(affine_space(1), orbifold_line(2), LatticeMap.identity(1), LatticeMap.from_rows([[2]]))
    point = build_resolution(point_inclusion(affine_space(1))).complex
    for character, block in pushforward_finite_quotient_complex(point, quotient):
        show(f"point of A^1 pushed to [A^1/(Z/2)], character {list(character)}", block)


def plane_curve(weights, title):
    quotient = StackyFan.build(2, 1, [list(weights)], [[1, 0], [0, 1]], [[0], [1]], ["z0", "z1"])
    c = build_resolution(point_inclusion(quotient)).complex
    c = pullback_along_torus_quotient(c, punctured_plane())
    extension = StackyMorphism(punctured_plane(), affine_space(2), LatticeMap.identity(2), LatticeMap.identity(2))
    show(title, iflat_extend_complex(c, extension))


if __name__ == "__main__":
    orbifold_point()
    plane_curve((2, -1), "parabola z1 = z0^2 on A^2")
    plane_curve((1, 1), "hyperbola z0 z1 = 1 on A^2")
