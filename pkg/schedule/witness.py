"""
Codimension witnesses.

P_i = det B_i is the determinant of B for the schedule prefix ending at
q(m, i), as a polynomial in the X_q of the tangency fiber over a first jet.
A witness is a rational assignment with every P_i nonzero, together with
evidence that P_{i+1} depends on an indeterminate unused by P_1..P_i.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from sympy import QQ

from exactalg import InconsistencyError, determinant, horner_evaluate, indeterminate_index
from geometry import AdaptedFrameData, Distribution
from jets import fiber_point, symbolic_fiber
from regmat import is_W_regular

from .reduction import (
    DEFAULT_MODULUS,
    CStructureReport,
    build_B,
    check_C_structure,
    check_C_structure_by_evaluation,
    evaluation_C,
    modular_det,
    reduce_to_C,
    reduce_to_C_modular,
)
from .subframes import SubframeSchedule, build_schedule, level_schedule

logger = logging.getLogger(__name__)

DEFAULT_SYMBOLIC_LIMIT = 20
DEFAULT_ATTEMPTS = 12


@dataclass
class CodimWitness:
    K: int
    q_values: List[int]
    mode: str
    first_jet: List[str]
    polynomials: List[Optional[str]] = field(default_factory=list)
    variables: List[List[int]] = field(default_factory=list)
    point: Dict[int, int] = field(default_factory=dict)
    values: List[str] = field(default_factory=list)
    fresh: List[bool] = field(default_factory=list)
    structure: List[CStructureReport] = field(default_factory=list)
    regular: bool = False
    regular_by: str = ""
    attempts: int = 0
    found: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "K": self.K,
            "q_values": self.q_values,
            "mode": self.mode,
            "first_jet": self.first_jet,
            "polynomials": self.polynomials,
            "variables": self.variables,
            "point": {str(k): v for k, v in sorted(self.point.items())},
            "values": self.values,
            "fresh": self.fresh,
            "structure": [s.to_dict() for s in self.structure],
            "regular": self.regular,
            "regular_by": self.regular_by,
            "attempts": self.attempts,
            "found": self.found,
        }


def default_first_jet(frame: AdaptedFrameData) -> tuple:
    """sigma = tau^{1,1}"""
    return frame.tau[(1, 1)]


def _variables_of(poly: Any) -> List[int]:
    present = set()
    for monom in poly.monoms():
        present.update(i for i, e in enumerate(monom) if e)
    return sorted(indeterminate_index(poly.ring, i) for i in present)


def _fresh_flags(variables: Sequence[Sequence[int]]) -> List[bool]:
    seen: set = set()
    flags = []
    for vs in variables:
        flags.append(bool(set(vs) - seen))
        seen.update(vs)
    return flags


def _symbolic_witness(
    D: Distribution, frame: AdaptedFrameData, sigma: Sequence[Any], schedule: SubframeSchedule,
    witness: CodimWitness, rng: random.Random, attempts: int, trials: int,
) -> CodimWitness:
    q_final = schedule.q_final
    jet = symbolic_fiber(D, sigma, q_final, schedule.tau, frame)
    polys = []
    for k in range(1, schedule.K + 1):
        sub = level_schedule(schedule, k)
        reduction = reduce_to_C(build_B(D, frame, sub, jet.truncate(sub.q_final + 1)))
        witness.structure.append(check_C_structure(reduction, sub))
        witness.structure[-1].raise_if_invalid()
        P = determinant(reduction.C) * reduction.sign
        polys.append(P)
        witness.polynomials.append(str(P.as_expr()) if hasattr(P, "as_expr") else str(P))
        witness.variables.append(_variables_of(P) if hasattr(P, "monoms") else [])
    witness.fresh = _fresh_flags(witness.variables)
    indices = jet.indeterminates()
    for attempt in range(1, attempts + 1):
        bound = 2 ** (attempt + 1)
        point = {q: rng.randint(1, bound) for q in indices}
        values = [
            QQ.convert(horner_evaluate(P, [point[q] for q in indices])) if hasattr(P, "monoms") else QQ.convert(P)
            for P in polys
        ]
        witness.attempts = attempt
        if all(values):
            witness.point, witness.values, witness.found = point, [str(v) for v in values], True
            break
    if witness.found:
        verdict = is_W_regular(D, jet.specialize(witness.point) if indices else jet, q_final, trials)
        witness.regular, witness.regular_by = verdict.regular, "exact-rank"
    return witness


def _evaluation_witness(
    D: Distribution, frame: AdaptedFrameData, sigma: Sequence[Any], schedule: SubframeSchedule,
    witness: CodimWitness, rng: random.Random, attempts: int, modulus: int, trials: int,
) -> CodimWitness:
    levels = [level_schedule(schedule, k) for k in range(1, schedule.K + 1)]
    for sub in levels:
        evaluate = evaluation_C(D, frame, sub, sigma, modulus)
        witness.structure.append(check_C_structure_by_evaluation(evaluate, sub, rng, modulus=modulus))
        witness.structure[-1].raise_if_invalid()
        witness.variables.append(list(sub.round_variables()))
        witness.polynomials.append(None)
    indices = schedule.variables()

    def residues(point: Dict[int, int]) -> List[int]:
        jet = fiber_point(D, sigma, schedule.q_final, schedule.tau, point, frame)
        out = []
        for sub in levels:
            reduction = reduce_to_C_modular(build_B(D, frame, sub, jet.truncate(sub.q_final + 1)), modulus)
            out.append(reduction.sign * modular_det(reduction.C, modulus) % modulus)
        return out

    for attempt in range(1, attempts + 1):
        bound = 2 ** (attempt + 1)
        point = {q: rng.randint(1, bound) for q in indices}
        values = residues(point)
        witness.attempts = attempt
        if all(values):
            witness.point, witness.values, witness.found = point, [f"{v} mod {modulus}" for v in values], True
            break
    if witness.found:
        fresh = [True]
        for k in range(1, len(levels)):
            previous = levels[k - 1].q_final
            new_vars = [v for v in levels[k].round_variables() if v > previous]
            base = residues(witness.point)[k]
            fresh.append(any(residues({**witness.point, v: witness.point[v] + 1})[k] != base for v in new_vars))
        witness.fresh = fresh
        jet = fiber_point(D, sigma, schedule.q_final, schedule.tau, witness.point, frame)
        verdict = is_W_regular(D, jet, schedule.q_final, trials)
        witness.regular, witness.regular_by = verdict.regular, "exact-rank"
    return witness


def codim_witness(
    D: Distribution,
    frame: AdaptedFrameData,
    sigma: Optional[Sequence[Any]] = None,
    K: int = 1,
    seed: int = 0,
    attempts: int = DEFAULT_ATTEMPTS,
    symbolic_limit: int = DEFAULT_SYMBOLIC_LIMIT,
    modulus: int = DEFAULT_MODULUS,
    trials: int = 5,
    schedule: Optional[SubframeSchedule] = None,
) -> CodimWitness:
    """
    Polynomials P_1..P_K and a point where none of them vanishes.

    Schedules ending at or below ``symbolic_limit`` are expanded exactly;
    longer ones are handled by evaluation modulo ``modulus``.
    """
    sigma = default_first_jet(frame) if sigma is None else tuple(QQ.convert(x) for x in sigma)
    schedule = build_schedule(frame.growth, K) if schedule is None else schedule
    rng = random.Random(seed)
    mode = "symbolic" if schedule.q_final <= symbolic_limit else "evaluation"
    witness = CodimWitness(K, list(schedule.q_values), mode, [str(x) for x in sigma])
    logger.info(f"codimension witness for K = {K} on {D.name or 'distribution'}, q = {schedule.q_values}, {mode}")
    if mode == "symbolic":
        _symbolic_witness(D, frame, sigma, schedule, witness, rng, attempts, trials)
    else:
        _evaluation_witness(D, frame, sigma, schedule, witness, rng, attempts, modulus, trials)
    if not witness.found:
        raise InconsistencyError(f"no witness point found in {attempts} attempts", stage="witness")
    logger.info(f"witness at {witness.point}: regular = {witness.regular}")
    return witness
