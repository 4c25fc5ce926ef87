"""SVG drawings of stratifications of tori of dimension at most two.

The torus is drawn as its fundamental domain [0,1]^c in the coordinates of
the torus basis. Each hyperplane family gets a ``<g class="hyperplane">``
group, each ray a set of hair ticks pointing to the side where <m, beta u_rho>
increases, and each stratum a ``<text class="cell-label">`` with its line bundle.
"""

from __future__ import annotations

from fractions import Fraction
from math import hypot
from typing import Sequence
from xml.sax.saxutils import escape

from . import lattice as la
from .core import class_label
from .errors import ToricError
from .strat import ExitPathQuiver

SIZE = 300
MARGIN = 40
HAIR = 7
PALETTE = ("#c0392b", "#2e64b5", "#1e8449", "#8e44ad", "#b9770e", "#17202a")


def _px(w: Sequence) -> tuple[float, float]:
    x = MARGIN + float(w[0]) * SIZE
    y = MARGIN + (SIZE - float(w[1]) * SIZE if len(w) > 1 else SIZE / 2)
    return round(x, 2), round(y, 2)


def _family_key(a: Sequence[int]) -> tuple[int, ...]:
    g = la.vec_gcd(a)
    v = tuple(x // g for x in a)
    lead = next(x for x in v if x)
    return v if lead > 0 else tuple(-x for x in v)


def _clip(a: Sequence[int], k: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]] | None:
    """The segment of a.w = k inside the unit square, or None."""
    pts = set()
    for axis in (0, 1):
        other = 1 - axis
        for t in (0, 1):
            if a[other] == 0:
                continue
            s = Fraction(k - a[axis] * t, a[other])
            if 0 <= s <= 1:
                w = [Fraction(0), Fraction(0)]
                w[axis], w[other] = Fraction(t), s
                pts.add(tuple(w))
    if len(pts) < 2:
        return None
    pts = sorted(pts)
    return pts[0], pts[-1]


def render_svg(q: ExitPathQuiver, labels: bool = True, hairs: bool = True) -> str:
    T = q.torus
    c = T.codim
    if c > 2:
        raise ToricError("DIM_TOO_HIGH", f"cannot draw a torus of dimension {c}")
    height = SIZE + 2 * MARGIN if c == 2 else 2 * MARGIN + 40
    width = SIZE + 2 * MARGIN
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">']
    if c == 2:
        x0, y0 = _px((0, 1))
        out.append(f'<rect class="domain" x="{x0}" y="{y0}" width="{SIZE}" height="{SIZE}" '
                   'fill="none" stroke="#999" stroke-dasharray="4 3"/>')
    elif c == 1:
        (xa, ya), (xb, _) = _px((0,)), _px((1,))
        out.append(f'<line class="domain" x1="{xa}" y1="{ya}" x2="{xb}" y2="{ya}" stroke="#999"/>')
        for x in (xa, xb):
            out.append(f'<path class="ident" d="M{x - 3} {ya - 8} L{x - 3} {ya + 8} M{x + 3} {ya - 8} '
                       f'L{x + 3} {ya + 8}" stroke="#555"/>')

    families: dict[tuple[int, ...], list[int]] = {}
    for r in T.active_rays:
        families.setdefault(_family_key(T.ray_functionals[r]), []).append(r)
    for key in sorted(families):
        rays = families[key]
        out.append(f'<g class="hyperplane" data-normal="{",".join(map(str, key))}" '
                   f'data-rays="{",".join(map(str, rays))}">')
        segments = []
        if c == 1:
            for k in range(0, abs(key[0])):
                segments.append(((Fraction(k, key[0]),), (Fraction(k, key[0]),)))
        else:
            corners = [la.dot(key, w) for w in ((0, 0), (0, 1), (1, 0), (1, 1))]
            for k in range(min(corners), max(corners) + 1):
                seg = _clip(key, k)
                if seg is None or seg[0] == seg[1]:
                    continue
                # x = 1 and y = 1 are identified with x = 0 and y = 0
                if any(all(p[i] == 1 for p in seg) for i in (0, 1)):
                    continue
                segments.append(seg)
        for p0, p1 in segments:
            (xa, ya), (xb, yb) = _px(p0), _px(p1)
            if c == 1:
                out.append(f'<line class="wall" x1="{xa}" y1="{ya - 12}" x2="{xa}" y2="{ya + 12}" stroke="#222"/>')
            else:
                out.append(f'<line class="wall" x1="{xa}" y1="{ya}" x2="{xb}" y2="{yb}" stroke="#222"/>')
            if not hairs:
                continue
            for n, r in enumerate(rays):
                a = T.ray_functionals[r]
                colour = PALETTE[r % len(PALETTE)]
                if c == 1:
                    dx, dy = (HAIR if a[0] > 0 else -HAIR), 0
                    spots = [(xa, ya + 6 + 4 * n)]
                else:
                    norm = hypot(a[0], a[1])
                    dx, dy = HAIR * a[0] / norm, -HAIR * a[1] / norm
                    spots = [(xa + (xb - xa) * t, ya + (yb - ya) * t) for t in (0.2 + 0.06 * n, 0.5 + 0.06 * n,
                                                                                0.8 + 0.06 * n)]
                for sx, sy in spots:
                    out.append(f'<line class="hair" data-ray="{r}" x1="{round(sx, 2)}" y1="{round(sy, 2)}" '
                               f'x2="{round(sx + dx, 2)}" y2="{round(sy + dy, 2)}" stroke="{colour}"/>')
        out.append("</g>")

    if labels:
        for s in sorted(q.strata, key=lambda s: s.id):
            x, y = _px(s.sample) if c else (MARGIN + SIZE / 2, MARGIN + 20)
            if s.dim < c:
                out.append(f'<circle class="cell-dot" cx="{x}" cy="{y}" r="2"/>')
            text = escape(class_label(s.bundle, T.fan))
            out.append(f'<text class="cell-label" data-stratum="{s.id}" data-dim="{s.dim}" '
                       f'x="{round(x + 4, 2)}" y="{round(y - 4, 2)}">{text}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def svg_counts(svg: str) -> dict[str, int]:
    """Element counts by class, for tests and the CLI summary."""
    return {name: svg.count(f'class="{name}"') for name in ("hyperplane", "wall", "hair", "cell-label", "ident")}

