"""
Report assembly, schema validation and text rendering
"""

from .report import (
    ERRATA,
    REPORT_SCHEMA,
    REPORT_SCHEMA_ID,
    Report,
    error_payload,
    errata_for,
    exit_code_for,
    load_report,
    to_json,
    validate_report,
)
from .text_view import render_text

__all__ = [
    "ERRATA",
    "REPORT_SCHEMA",
    "REPORT_SCHEMA_ID",
    "Report",
    "error_payload",
    "errata_for",
    "exit_code_for",
    "load_report",
    "to_json",
    "validate_report",
    "render_text",
]
