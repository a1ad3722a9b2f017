"""
Problem File Setup Module

Loads "hjet-problem/1" JSON files into a Distribution plus the optional
curve, first jet and growth-vector override the commands need.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import jsonschema
from sympy import QQ

from exactalg import (
    HJetError,
    ParseError,
    PreconditionError,
    ambient_ring,
    parse_polynomial,
    parse_rational,
)
from geometry import Distribution, GrowthVector, OneForm, VectorField
from jets import PolyCurve

logger = logging.getLogger(__name__)

PROBLEM_SCHEMA_ID = "hjet-problem/1"

_STRING_ROWS = {"type": "array", "items": {"type": "array", "items": {"type": "string"}}}

PROBLEM_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": PROBLEM_SCHEMA_ID,
    "type": "object",
    "required": ["schema", "dimension", "coframe"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": PROBLEM_SCHEMA_ID},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "dimension": {"type": "integer", "minimum": 1},
        "coframe": _STRING_ROWS,
        "generators": _STRING_ROWS,
        "base_point": {"type": "array", "items": {"type": "string"}},
        "curve": {
            "type": "object",
            "required": ["components"],
            "additionalProperties": False,
            "properties": {
                "t0": {"type": "string"},
                "components": _STRING_ROWS,
            },
        },
        "first_jet": {"type": "array", "items": {"type": "string"}},
        "growth": {"type": "string"},
    },
}


@dataclass(frozen=True)
class Problem:
    """A parsed problem file"""

    name: str
    distribution: Distribution
    curve: Optional[PolyCurve] = None
    t0: Any = QQ.zero
    first_jet: Optional[Tuple[Any, ...]] = None
    growth: Optional[GrowthVector] = None
    path: Optional[str] = None

    @property
    def N(self) -> int:
        return self.distribution.N

    @property
    def p(self) -> int:
        return self.distribution.p

    def summary(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "N": self.N,
            "p": self.p,
            "n": self.distribution.n,
            "has_curve": self.curve is not None,
            "has_first_jet": self.first_jet is not None,
            "growth_override": str(self.growth) if self.growth else None,
        }


def _located(exc: ParseError, where: str, path: Optional[str]) -> ParseError:
    """Re-anchor an entry-level parse error at its position in the file"""
    located = ParseError(f"{where}: {exc.message}", path=path)
    located.line, located.column = exc.line, exc.column
    return located


def _rows(
    entries: Sequence[Sequence[str]], dimension: int, ring: Any, where: str, path: Optional[str]
) -> List[Tuple[Any, ...]]:
    out = []
    for i, row in enumerate(entries):
        if len(row) != dimension:
            raise ParseError(f"{where}[{i}] has {len(row)} entries, expected {dimension}", path=path)
        parsed = []
        for j, text in enumerate(row):
            try:
                parsed.append(parse_polynomial(text, ring))
            except ParseError as exc:
                raise _located(exc, f"{where}[{i}][{j}]", path) from exc
        out.append(tuple(parsed))
    return out


def _rationals(values: Sequence[str], where: str, path: Optional[str]) -> Tuple[Any, ...]:
    out = []
    for i, text in enumerate(values):
        try:
            out.append(parse_rational(text))
        except ParseError as exc:
            raise _located(exc, f"{where}[{i}]", path) from exc
    return tuple(out)


def validate_problem(data: Any, path: Optional[str] = None) -> None:
    try:
        jsonschema.validate(instance=data, schema=PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise ParseError(f"problem does not match {PROBLEM_SCHEMA_ID} at {where}: {exc.message}", path=path) from exc


def parse_problem(data: Dict[str, Any], path: Optional[str] = None) -> Problem:
    """Build a Problem from the decoded JSON object"""
    validate_problem(data, path)
    N = data["dimension"]
    ring = ambient_ring(N)
    name = data.get("name") or (Path(path).stem if path else "problem")
    forms = tuple(OneForm(ring, row) for row in _rows(data["coframe"], N, ring, "coframe", path))
    fields = None
    if "generators" in data:
        fields = tuple(VectorField(ring, row) for row in _rows(data["generators"], N, ring, "generators", path))

    curve, t0 = None, QQ.zero
    if "curve" in data:
        described = data["curve"]
        t0 = parse_rational(described.get("t0", "0"))
        components = described["components"]
        if len(components) != N:
            raise ParseError(f"curve has {len(components)} components, expected {N}", path=path)
        curve = PolyCurve.from_coefficients(
            [_rationals(c, f"curve.components[{i}]", path) for i, c in enumerate(components)]
        )

    if "base_point" in data:
        base_point = _rationals(data["base_point"], "base_point", path)
        if len(base_point) != N:
            raise ParseError(f"base_point has {len(base_point)} entries, expected {N}", path=path)
    elif curve is not None:
        base_point = curve.at(t0)
    else:
        base_point = (QQ.zero,) * N
    if curve is not None and curve.at(t0) != tuple(base_point):
        raise PreconditionError(f"curve passes through {curve.at(t0)} at t0, not the base point {base_point}")

    first_jet = None
    if "first_jet" in data:
        first_jet = _rationals(data["first_jet"], "first_jet", path)
        if len(first_jet) != N:
            raise ParseError(f"first_jet has {len(first_jet)} entries, expected {N}", path=path)

    growth = GrowthVector.parse(data["growth"]) if "growth" in data else None
    distribution = Distribution(ring, forms, base_point, fields, name)
    return Problem(name, distribution, curve, t0, first_jet, growth, path)


def load_problem(path: str) -> Problem:
    """Read, validate and parse a problem file; raises ParseError with line/column on bad JSON"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read problem file: {exc}", path=path) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno, path=path) from exc
    return parse_problem(data, path)


class ProblemSetup:
    """Handles problem loading for the command-line front end"""

    def __init__(self, verbose: bool = False):
        self.verbose = verbose
        self.problem: Optional[Problem] = None

    def initialize_problem(self, path: str) -> Tuple[Optional[Problem], Dict[str, Any]]:
        """
        Load a problem file and return setup results

        Returns:
            Tuple of (problem_instance, setup_info)
        """
        setup_info: Dict[str, Any] = {
            "success": False,
            "message": "",
            "stats": {},
            "error": None,
            "exception": None,
        }
        try:
            if self.verbose:
                print(f"🔄 Loading problem {path}...")
            self.problem = load_problem(path)
            setup_info["stats"] = self.problem.summary()
            setup_info["success"] = True
            setup_info["message"] = f"Loaded {self.problem.name}: N = {self.problem.N}, p = {self.problem.p}"
            logger.info(setup_info["message"])
            if self.verbose:
                print(f"✅ {setup_info['message']}")
        except HJetError as e:
            e.with_stage("parse")
            setup_info["error"] = str(e)
            setup_info["exception"] = e
            setup_info["message"] = f"Problem setup failed: {e}"
            logger.error(setup_info["message"])
            if self.verbose:
                print(f"❌ {setup_info['message']}")
            self.problem = None
        return self.problem, setup_info
