"""
Setup module for problem loading and run configuration
"""

from .config import SEED_VARIABLE, ToolkitConfig
from .problem_setup import (
    PROBLEM_SCHEMA,
    PROBLEM_SCHEMA_ID,
    Problem,
    ProblemSetup,
    load_problem,
    parse_problem,
    validate_problem,
)

__all__ = [
    "SEED_VARIABLE",
    "ToolkitConfig",
    "PROBLEM_SCHEMA",
    "PROBLEM_SCHEMA_ID",
    "Problem",
    "ProblemSetup",
    "load_problem",
    "parse_problem",
    "validate_problem",
]
