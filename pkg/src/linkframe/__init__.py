"""Gauss linking numbers, ribbon framing numbers and Wilson loop phases."""

from .crossings import Crossing, link_by_crossings, signed_crossings
from .curves import (CurvePair, ParametricCurve, Piece, PolygonalCurve, circle, closure_check,
                     line_piece, min_separation, paper_example, piecewise_linear, polygonize, sample)
from .errors import (ConvergenceError, DegeneracyError, InvalidArgumentError, LinkframeError,
                     SingularityError)
from .estimate import LinkEstimate
from .framing import (FramedCurve, add_twists, blackboard_framing, framing_number,
                      twist_placement_invariance)
from .kernels import BACKEND
from .polygonal import link_exact, segment_pair_link, symmetry_report
from .quadrature import QuadratureConfig, epsilon_sweep, link_numeric, linking_integrand
from .wilson import WilsonValue, wilson_expectation, wilson_from_curves

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConvergenceError", "Crossing", "CurvePair", "DegeneracyError", "FramedCurve",
    "InvalidArgumentError", "LinkEstimate", "LinkframeError", "ParametricCurve", "Piece",
    "PolygonalCurve", "QuadratureConfig", "SingularityError", "WilsonValue", "add_twists",
    "blackboard_framing", "circle", "closure_check", "epsilon_sweep", "framing_number",
    "line_piece", "link_by_crossings", "link_exact", "link_numeric", "linking_integrand",
    "min_separation", "paper_example", "piecewise_linear", "polygonize", "sample",
    "segment_pair_link", "signed_crossings", "symmetry_report", "twist_placement_invariance",
    "wilson_expectation", "wilson_from_curves",
]
