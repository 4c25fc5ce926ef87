"""Resolve the identity point of a few toric stacks and print the complexes.

Run: python3 demos/point_resolutions.py
"""

from toricres import build_resolution, class_label
from toricres.fans import hirzebruch, point_inclusion, projective_space, weighted_projective_line_stack
from toricres.resolution import fiber_exactness_check


def show(name, f):
    aug = build_resolution(point_inclusion(f))
    c = aug.complex
    names = list(f.names) if f.names else [f"x{i}" for i in range(f.n_rays)]
    print(f"== point of {name}")
    for k in c.degrees():
        print(f"  C_{k}: " + " + ".join(class_label(t, f) for t in c.terms(k)))
    for k in sorted(c.differential):
        for (i, j), p in sorted(c.differential[k].items()):
            print(f"  d_{k}[{i},{j}] = {p.to_str(names)}")
    report = fiber_exactness_check(aug, trials=50, seed=0)
    print(f"  fibers: {'exact off the point' if report.passed else report.violations[:1]}")


if __name__ == "__main__":
    show("P^1", projective_space(1))
    show("P^2", projective_space(2))
    show("F_1", hirzebruch(1))
    show("P(1,2)", weighted_projective_line_stack())
