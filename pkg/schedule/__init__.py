"""
Sub-frame schedules, the B and C matrices and codimension witnesses
"""

from .reduction import (
    DEFAULT_MODULUS,
    BMatrix,
    ColumnTag,
    CReduction,
    CStructureReport,
    RowTag,
    adapted_distribution,
    build_A1,
    build_B,
    check_C_structure,
    check_C_structure_by_evaluation,
    designated_variables,
    evaluation_C,
    extend_to_frame,
    modular_det,
    modular_matrix,
    reduce_to_C,
    reduce_to_C_modular,
    signed_residue,
    subframe_vectors,
)
from .subframes import (
    FrameKind,
    FrameLabel,
    ScheduleState,
    SubframeSchedule,
    build_schedule,
    choose_all_subframes,
    choose_subframe,
    extend_schedule,
    label_table,
    level_schedule,
    q_bound,
    tau_table,
)
from .witness import CodimWitness, codim_witness, default_first_jet

__all__ = [
    "DEFAULT_MODULUS",
    "BMatrix",
    "ColumnTag",
    "CReduction",
    "CStructureReport",
    "RowTag",
    "adapted_distribution",
    "build_A1",
    "build_B",
    "check_C_structure",
    "check_C_structure_by_evaluation",
    "designated_variables",
    "evaluation_C",
    "extend_to_frame",
    "modular_det",
    "modular_matrix",
    "reduce_to_C",
    "reduce_to_C_modular",
    "signed_residue",
    "subframe_vectors",
    "FrameKind",
    "FrameLabel",
    "ScheduleState",
    "SubframeSchedule",
    "build_schedule",
    "choose_all_subframes",
    "choose_subframe",
    "extend_schedule",
    "label_table",
    "level_schedule",
    "q_bound",
    "tau_table",
    "CodimWitness",
    "codim_witness",
    "default_first_jet",
]
