"""Line bundle resolutions of toric substacks, Morse reduction of the
resulting complexes and toric Frobenius analysis, in exact arithmetic."""

from .core import (DivisorClass, LatticeMap, StackyFan, StackyMorphism, SupportFunction, class_label,
                   pic_canonical_form, pic_coordinates, validate_stacky_fan)
from .errors import ToricError
from .frobenius import (frob_pushforward, frob_set, generation_report, linear_inclusions, zonotope_vertices)
from .resolution import build_resolution, diagonal_resolution, fiber_exactness_check, restrict_to_chart
from .strat import exit_path_quiver, exit_torus, stratify, thomsen_collection

__all__ = [
    "DivisorClass", "LatticeMap", "StackyFan", "StackyMorphism", "SupportFunction", "ToricError",
    "build_resolution", "class_label", "diagonal_resolution", "exit_path_quiver", "exit_torus",
    "fiber_exactness_check", "frob_pushforward", "frob_set", "generation_report", "linear_inclusions",
    "pic_canonical_form", "pic_coordinates", "restrict_to_chart", "stratify", "thomsen_collection",
    "validate_stacky_fan", "zonotope_vertices",
]
