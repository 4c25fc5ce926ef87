import xml.etree.ElementTree as ET

import pytest

from toricres.errors import ToricError
from toricres.fans import diagonal_morphism, point_inclusion, projective_space
from toricres.render import render_svg, svg_counts
from toricres.strat import stratify


def counts(phi, **kw):
    return svg_counts(render_svg(stratify(phi), **kw))


def test_p2_point_drawing():
    # three line families, nine hairs, six cells: one point, three edges, two triangles
    c = counts(point_inclusion(projective_space(2)))
    assert (c["hyperplane"], c["hair"], c["cell-label"]) == (3, 9, 6)


def test_p1_point_drawing():
    c = counts(point_inclusion(projective_space(1)))
    assert (c["hyperplane"], c["hair"], c["cell-label"]) == (1, 2, 2)


def test_p2_diagonal_drawing():
    c = counts(diagonal_morphism(projective_space(2)))
    assert (c["hyperplane"], c["hair"], c["cell-label"]) == (3, 18, 6)


def test_drawing_is_well_formed_and_optional_parts_can_be_dropped():
    phi = point_inclusion(projective_space(2))
    svg = render_svg(stratify(phi))
    assert ET.fromstring(svg).tag.endswith("svg")
    bare = counts(phi, labels=False, hairs=False)
    assert bare["hair"] == 0 and bare["cell-label"] == 0 and bare["hyperplane"] == 3


def test_high_dimensional_torus_is_refused():
    with pytest.raises(ToricError) as err:
        render_svg(stratify(point_inclusion(projective_space(3))))
    assert err.value.code == "DIM_TOO_HIGH"
