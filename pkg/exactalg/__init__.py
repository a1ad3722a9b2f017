"""
Exact scalar, polynomial, power-series and matrix kernels
"""

from .errors import (
    ArityMismatchError,
    HJetError,
    InconsistencyError,
    IndexRangeError,
    InsufficientJetOrderError,
    MissingPivotError,
    NonTangentError,
    NotRegularError,
    ParseError,
    PreconditionError,
    RankDeficientError,
    StructureViolationError,
    SurjectivityError,
    WidthMismatchError,
)
from .matrices import (
    ExactMatrix,
    RankEstimate,
    determinant,
    exact_rank,
    inverse,
    modular_rank,
    nullspace_basis,
    pivot_columns,
    probabilistic_rank,
    rank_probabilistic,
    right_inverse,
    solve_particular,
)
from .polynomials import (
    TIME,
    TIME_FIELD,
    TIME_RING,
    MultiPoly,
    ambient_ring,
    evaluate_at,
    horner_evaluate,
    indeterminate_index,
    indeterminate_ring,
    parse_polynomial,
    parse_rational,
    partial,
    polynomial_to_string,
    reduce_mod,
)
from .series import TruncatedSeries, series_compose

__all__ = [
    "ArityMismatchError",
    "HJetError",
    "InconsistencyError",
    "IndexRangeError",
    "InsufficientJetOrderError",
    "MissingPivotError",
    "NonTangentError",
    "NotRegularError",
    "ParseError",
    "PreconditionError",
    "RankDeficientError",
    "StructureViolationError",
    "SurjectivityError",
    "WidthMismatchError",
    "ExactMatrix",
    "RankEstimate",
    "determinant",
    "exact_rank",
    "inverse",
    "modular_rank",
    "nullspace_basis",
    "pivot_columns",
    "probabilistic_rank",
    "rank_probabilistic",
    "right_inverse",
    "solve_particular",
    "TIME",
    "TIME_FIELD",
    "TIME_RING",
    "MultiPoly",
    "ambient_ring",
    "evaluate_at",
    "horner_evaluate",
    "indeterminate_index",
    "indeterminate_ring",
    "parse_polynomial",
    "parse_rational",
    "partial",
    "polynomial_to_string",
    "reduce_mod",
    "TruncatedSeries",
    "series_compose",
]
