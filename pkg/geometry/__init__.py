"""
Vector fields, 1-forms, distribution flags and adapted frames
"""

from .adapted_frame import AdaptedFrameData, adapted_frame
from .distribution import (
    Distribution,
    FieldRecord,
    FlagData,
    GrowthVector,
    flag_at_point,
    spanning_fields,
)
from .fields import OneForm, VectorField, d_oneform_eval, lie_bracket, linear_combination
from .library import contact, engel, flat, from_strings, goursat, integrable, martinet, named, toy

__all__ = [
    "AdaptedFrameData",
    "adapted_frame",
    "Distribution",
    "FieldRecord",
    "FlagData",
    "GrowthVector",
    "flag_at_point",
    "spanning_fields",
    "OneForm",
    "VectorField",
    "d_oneform_eval",
    "lie_bracket",
    "linear_combination",
    "contact",
    "engel",
    "flat",
    "from_strings",
    "goursat",
    "integrable",
    "martinet",
    "named",
    "toy",
]
