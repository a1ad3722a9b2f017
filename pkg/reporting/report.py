"""
Report assembly for the command-line front end.

Reports are schema-versioned JSON objects ("hjet-report/1"). Serialization
sorts keys so identical inputs and seed give byte-identical output apart
from the timing field.
"""

import json
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import jsonschema

from exactalg import HJetError, InconsistencyError

logger = logging.getLogger(__name__)

REPORT_SCHEMA_ID = "hjet-report/1"

STATUSES = ("ok", "verdict-false", "error")

REPORT_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": REPORT_SCHEMA_ID,
    "type": "object",
    "required": ["schema", "command", "status", "exit_code", "seed", "result", "errata", "error", "timing"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": REPORT_SCHEMA_ID},
        "command": {
            "type": "object",
            "required": ["name", "arguments"],
            "properties": {"name": {"type": "string"}, "arguments": {"type": "object"}},
        },
        "status": {"enum": list(STATUSES)},
        "exit_code": {"enum": [0, 2, 3, 4, 5]},
        "seed": {"type": "integer"},
        "result": {"type": "object"},
        "errata": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "note"],
                "properties": {"id": {"type": "string"}, "note": {"type": "string"}},
            },
        },
        "error": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["type", "message", "stage"],
                    "properties": {
                        "type": {"type": "string"},
                        "message": {"type": "string"},
                        "stage": {"type": ["string", "null"]},
                        "line": {"type": ["integer", "null"]},
                        "column": {"type": ["integer", "null"]},
                    },
                },
            ]
        },
        "timing": {"type": "object", "properties": {"seconds": {"type": "number"}}},
    },
}

ERRATA: Dict[str, str] = {
    "schedule-inner-loop": (
        "the sub-frame algorithm zeroes tau^{q+b} inside its inner loop; zeroing tau^q there would "
        "overwrite the assignment made at the current block"
    ),
    "toy-tau3-label": (
        "for type (0,10,12,14) the printed tau table gives tau^3 = eta^{2,1}; eta^{2,1} is not in D and "
        "the algorithm assigns tau^3 = tau^{2,1}"
    ),
    "toy-B-size": (
        "for type (0,10,12,14) B is square of size p(q+2) = 192; the printed 184 is the number of deleted "
        "identity rows"
    ),
    "designated-coefficients": (
        "designated entries of C are kept with their exact integer coefficients instead of being "
        "normalized to 1"
    ),
    "dlambda-sign": "with lambda = dz - y dx, d lambda(d_x + y d_z, d_y) = +1",
}

TOY_GROWTH = (0, 10, 12, 14)


def errata_for(command: str, growth: Optional[tuple] = None) -> List[Dict[str, str]]:
    """Errata notes attached to the reports of a command"""
    ids: List[str] = []
    if command in ("schedule", "certify"):
        ids.append("schedule-inner-loop")
        if growth is not None and tuple(growth) == TOY_GROWTH:
            ids.extend(["toy-tau3-label", "toy-B-size"])
    if command == "certify":
        ids.extend(["designated-coefficients", "dlambda-sign"])
    return [{"id": i, "note": ERRATA[i]} for i in ids]


def error_payload(error: Exception) -> Dict[str, Any]:
    if isinstance(error, HJetError):
        return {
            "type": type(error).__name__,
            "message": error.message,
            "stage": error.stage,
            "line": getattr(error, "line", None),
            "column": getattr(error, "column", None),
        }
    return {"type": type(error).__name__, "message": str(error), "stage": None, "line": None, "column": None}


def exit_code_for(error: Exception) -> int:
    if isinstance(error, HJetError):
        return error.exit_code if error.exit_code in (2, 3, 4, 5) else InconsistencyError.exit_code
    return InconsistencyError.exit_code


@dataclass
class Report:
    command: str
    arguments: Dict[str, Any]
    seed: int = 0
    result: Dict[str, Any] = field(default_factory=dict)
    errata: List[Dict[str, str]] = field(default_factory=list)
    error: Optional[Exception] = None
    verdict: bool = True
    started: float = field(default_factory=time.perf_counter)
    seconds: Optional[float] = None

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        return "ok" if self.verdict else "verdict-false"

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return exit_code_for(self.error)
        return 0 if self.verdict else 4

    def fail(self, error: Exception) -> "Report":
        self.error = error
        return self

    def finish(self) -> "Report":
        if self.seconds is None:
            self.seconds = round(time.perf_counter() - self.started, 6)
        return self

    def to_dict(self, timing: bool = True) -> Dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA_ID,
            "command": {"name": self.command, "arguments": self.arguments},
            "status": self.status,
            "exit_code": self.exit_code,
            "seed": self.seed,
            "result": self.result,
            "errata": self.errata,
            "error": error_payload(self.error) if self.error is not None else None,
            "timing": {"seconds": self.seconds} if timing and self.seconds is not None else {},
        }


def validate_report(data: Dict[str, Any]) -> None:
    try:
        jsonschema.validate(instance=data, schema=REPORT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InconsistencyError(f"report does not match {REPORT_SCHEMA_ID}: {exc.message}", stage="report") from exc


def to_json(report: Report, timing: bool = True) -> str:
    data = report.finish().to_dict(timing)
    validate_report(data)
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_report(text: str) -> Dict[str, Any]:
    """Parse and re-validate serialized report text"""
    data = json.loads(text)
    validate_report(data)
    return data
