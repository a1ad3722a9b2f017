"""
Curve jets, pullback jets and horizontal jet fibers
"""

from .curve_jet import CurveJet, PolyCurve, TauAssignment, TauKind, TauLabel
from .pullback import composed_coefficients, is_tangent, pullback_jet, pullback_series, vanishing_order, velocity_series
from .tangency import fiber_point, kernel_coordinates, symbolic_fiber, tangency_solve, tau_vectors

__all__ = [
    "CurveJet",
    "PolyCurve",
    "TauAssignment",
    "TauKind",
    "TauLabel",
    "composed_coefficients",
    "is_tangent",
    "pullback_jet",
    "pullback_series",
    "vanishing_order",
    "velocity_series",
    "fiber_point",
    "kernel_coordinates",
    "symbolic_fiber",
    "tangency_solve",
    "tau_vectors",
]
