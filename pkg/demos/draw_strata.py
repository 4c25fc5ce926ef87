"""Draw the stratified exit torus for a point and a diagonal as SVG files.

Run: python3 demos/draw_strata.py OUTDIR
"""

import sys
from pathlib import Path

from toricres import stratify
from toricres.fans import diagonal_morphism, hirzebruch, point_inclusion, projective_space
from toricres.render import render_svg, svg_counts

if __name__ == "__main__":
    out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    out.mkdir(parents=True, exist_ok=True)
    cases = {"p2_point": point_inclusion(projective_space(2)), "f2_point": point_inclusion(hirzebruch(2)),
             "p2_diagonal": diagonal_morphism(projective_space(2))}
    for name, phi in cases.items():
        svg = render_svg(stratify(phi))
        (out / f"{name}.svg").write_text(svg)
        print(name, svg_counts(svg))
