"""
Differential operators along curves and the right inverse of the linearization
"""

from .diff_op import (
    FRAC,
    DiffOp,
    apply,
    derivative_matrix,
    evaluate_fraction,
    monomial_inputs,
    numeric_residual,
    op_adjoint,
    op_compose,
    to_fraction,
)
from .inversion import (
    InversionResult,
    ResidualReport,
    WorkingInterval,
    build_M,
    invert,
    linearization,
    sample_grid,
    select_pivots,
    solve_S,
    verify_right_inverse,
    working_interval,
)

__all__ = [
    "FRAC",
    "DiffOp",
    "apply",
    "derivative_matrix",
    "evaluate_fraction",
    "monomial_inputs",
    "numeric_residual",
    "op_adjoint",
    "op_compose",
    "to_fraction",
    "InversionResult",
    "ResidualReport",
    "WorkingInterval",
    "build_M",
    "invert",
    "linearization",
    "sample_grid",
    "select_pivots",
    "solve_S",
    "verify_right_inverse",
    "working_interval",
]
