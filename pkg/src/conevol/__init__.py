"""Weighted cone-volume functionals of convex polytopes and the geometric
inequalities they satisfy."""

from .errors import ConevolError
from .geometry import (
    BallInfo,
    Polytope,
    ball_info,
    chebyshev_center,
    convex_hull,
    facet_heights,
    simplex_from_vertices,
    surface_area,
    volume,
)
from .shapes import generate, metadata
from .weights import WeightFunction, make_weight, parse_weight

__version__ = "0.1.0"

__all__ = [
    "BallInfo",
    "ConevolError",
    "Polytope",
    "WeightFunction",
    "ball_info",
    "chebyshev_center",
    "convex_hull",
    "facet_heights",
    "generate",
    "make_weight",
    "metadata",
    "parse_weight",
    "simplex_from_vertices",
    "surface_area",
    "volume",
]
