"""
Area-preserving G1 cubic Bezier interpolation of planar curves.
"""
from apbez.area import AreaSpec, FeasibilityReport, bezier_signed_area, classify_feasibility, p_avg, solve_r1, solve_r2
from apbez.geometry import CubicBezier, HermiteData, Vec2, bezier_from_hermite, monotone_x
from apbez.interpolator import (HermiteBaseline, OptimizedAP, Segment, StandardAP, interpolate_hermite,
                                interpolate_optimized, interpolate_piecewise, interpolate_standard)
from apbez.targets import Target, hermite_segment_data, make_builtin

__version__ = "0.1.0"

__all__ = [
    "AreaSpec",
    "CubicBezier",
    "FeasibilityReport",
    "HermiteBaseline",
    "HermiteData",
    "OptimizedAP",
    "Segment",
    "StandardAP",
    "Target",
    "Vec2",
    "bezier_from_hermite",
    "bezier_signed_area",
    "classify_feasibility",
    "hermite_segment_data",
    "interpolate_hermite",
    "interpolate_optimized",
    "interpolate_piecewise",
    "interpolate_standard",
    "make_builtin",
    "monotone_x",
    "p_avg",
    "solve_r1",
    "solve_r2",
]
