"""
Regularity matrix A and the W-regularity verdicts
"""

from .regularity_matrix import (
    RegularityMatrix,
    assemble_blocks,
    binomial,
    block_Lambda_derivatives,
    block_layout,
    block_R_derivatives,
    build_A,
    curvature_series,
    scalar_domain,
)
from .verdicts import (
    REASONS,
    RegularityVerdict,
    is_dlambda_regular,
    is_in_W_alpha,
    is_injective,
    is_W_regular,
    jet_order_threshold,
    microflexibility_threshold,
    min_q,
    underdetermined,
)

__all__ = [
    "RegularityMatrix",
    "assemble_blocks",
    "binomial",
    "block_Lambda_derivatives",
    "block_layout",
    "block_R_derivatives",
    "build_A",
    "curvature_series",
    "scalar_domain",
    "REASONS",
    "RegularityVerdict",
    "is_dlambda_regular",
    "is_in_W_alpha",
    "is_injective",
    "is_W_regular",
    "jet_order_threshold",
    "microflexibility_threshold",
    "min_q",
    "underdetermined",
]
