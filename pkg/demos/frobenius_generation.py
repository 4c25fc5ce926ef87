"""Which line bundles O(D) generate, tested by linear inclusions, with the
Frobenius pushforward as a second opinion.

Run: python3 demos/frobenius_generation.py
"""

from toricres import class_label, frob_pushforward, frob_set, generation_report, pic_canonical_form, zonotope_vertices
from toricres.fans import double_blowup_p2, hirzebruch, projective_space


def p2_table():
    f = projective_space(2)
    print("== P^2: O(k) by linear inclusions")
    for k in range(-7, 5):
        rep = generation_report(f, (k, 0, 0))
        found, cert = frob_set(f, (k, 0, 0))
        frob = sorted(class_label(c, f) for c in found)
        status = "unobstructed" if rep.unobstructed else "obstructed"
        print(f"  O({k:>2}): {status:<12} Frob = {', '.join(frob)}  (scanned to ell = {cert.horizon})")


def f1_zonotope():
    f = hirzebruch(1)
    z = zonotope_vertices(f)
    print("== F_1: zonotope vertices in Pic coordinates")
    print("  " + " ".join(str(v) for v in z.vertices))
    dec = frob_pushforward(f, (0, 0, 0, 0), 3)
    print("  (F_3)_* O = " + " + ".join(f"{m} {class_label(c, f)}" for c, m in sorted(dec.summands.items(),
                                                                                        key=lambda t: t[0].coefficients)))


def double_blowup():
    f = double_blowup_p2()
    d = (-1, 1, -1, 0, 0)
    print(f"== double blow-up of P^2: {class_label(pic_canonical_form(d, f), f)}")
    for v in generation_report(f, d).verdicts:
        names = ",".join(v.inclusion.source.names) or "point"
        print(f"  dim {v.dim} [{names}]: H = {v.cohomology.dims or 0}")


if __name__ == "__main__":
    p2_table()
    f1_zonotope()
    double_blowup()
