"""
Adapted frames at the base point.

For each step s and 1 <= j <= p_s the frame provides tau^{s,j} in D_x,
eta^{s,j} in D^s_x outside D^{s-1}_x, zeta^{s,j} in D^{s+1}_x and a constant recombination
lambda^{s,j} of the defining coframe with

    lambda^{s,j}(zeta^{s',j'}) = delta,
    d lambda^{s',j'}(tau^{s,j}, eta^{s,j}) = delta  for s' = s, 0 for s' > s.

Pairs are chosen greedily: w = d Lambda_x(tau, eta) is accepted when it lies
in Lambda_x(D^{s+1}_x) and is independent of Lambda_x(D^s_x) and of the
values already accepted at this step.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import QQ

from exactalg import (
    ExactMatrix,
    PreconditionError,
    SurjectivityError,
    exact_rank,
    inverse,
    solve_particular,
)

from .distribution import Distribution, FieldRecord, FlagData, GrowthVector, flag_at_point
from .fields import OneForm, lie_bracket, linear_combination

logger = logging.getLogger(__name__)

Label = Tuple[int, int]
Vector = Tuple[Any, ...]

PIVOT_RULES = ("leftmost", "rightmost")


@dataclass(frozen=True)
class AdaptedFrameData:
    """Pointwise adapted frame and the recombined coframe"""

    growth: GrowthVector
    source_growth: GrowthVector
    labels: Tuple[Label, ...]
    tau: Dict[Label, Vector]
    eta: Dict[Label, Vector]
    zeta: Dict[Label, Vector]
    brackets: Dict[Label, Vector]
    coframe: Dict[Label, OneForm]
    recombination: ExactMatrix
    base_point: Tuple[Any, ...]
    pivot_rule: str = "leftmost"

    @property
    def p(self) -> int:
        return len(self.labels)

    def index(self, label: Label) -> int:
        return self.labels.index(label)

    def ordered_coframe(self) -> Tuple[OneForm, ...]:
        return tuple(self.coframe[label] for label in self.labels)

    def zeta_frame(self) -> Tuple[Vector, ...]:
        return tuple(self.zeta[label] for label in self.labels)

    def level_labels(self, s: int) -> Tuple[Label, ...]:
        return tuple(label for label in self.labels if label[0] == s)

    def duality_matrix(self) -> ExactMatrix:
        """lambda^a(zeta^b) at the base point"""
        x = self.base_point
        return ExactMatrix.from_rows(
            [[self.coframe[a].pair_vector(x, self.zeta[b]) for b in self.labels] for a in self.labels],
            QQ, cols=self.p,
        )

    def triangularity_matrix(self) -> ExactMatrix:
        """Entry (a, b) = d lambda^a(tau^b, eta^b) at the base point"""
        x = self.base_point
        return ExactMatrix.from_rows(
            [[self.coframe[a].d_at(x, self.tau[b], self.eta[b]) for b in self.labels] for a in self.labels],
            QQ, cols=self.p,
        )

    def is_triangular(self) -> bool:
        """delta on equal levels, zero for higher forms"""
        T = self.triangularity_matrix()
        for i, a in enumerate(self.labels):
            for j, b in enumerate(self.labels):
                value = T[i, j]
                if a[0] == b[0] and value != (QQ.one if a == b else QQ.zero):
                    return False
                if a[0] > b[0] and value:
                    return False
        return True


def _candidates(flag: FlagData, s: int, x: Vector) -> List[Tuple[int, FieldRecord]]:
    """(spanning index, record) pairs, the record produced at step s with its value outside D^{s-1}_x"""
    previous = list(flag.basis_upto(s - 1)) if s > 1 else []
    fresh = []
    for rec in flag.levels[s - 1]:
        value = rec.field.value_at(x)
        if exact_rank(ExactMatrix.from_columns(previous + [value], len(value))) > len(previous):
            fresh.append(rec)
    return [(i, rec) for i in range(len(flag.spanning)) for rec in fresh]


def _d_lambda(curvatures: Sequence[ExactMatrix], v: Vector, w: Vector) -> Vector:
    """(d lambda^s)_x(v, w) for every defining form"""
    out = []
    for F in curvatures:
        total = QQ.zero
        for a, va in enumerate(v):
            if va:
                row = F.row(a)
                for b, wb in enumerate(w):
                    if wb and row[b]:
                        total += row[b] * va * wb
        out.append(total)
    return tuple(out)


def adapted_frame(
    D: Distribution,
    gv: Optional[GrowthVector] = None,
    flag: Optional[FlagData] = None,
    pivot_rule: str = "leftmost",
) -> AdaptedFrameData:
    """Construct the adapted frame of a bracket-generating distribution at its base point"""
    if pivot_rule not in PIVOT_RULES:
        raise PreconditionError(f"unknown pivot rule {pivot_rule!r}; expected one of {PIVOT_RULES}")
    flag = flag or flag_at_point(D)
    if not flag.bracket_generating:
        raise PreconditionError(f"{D.name or 'distribution'} is not bracket-generating at the base point")
    if gv is not None and gv.compressed() != flag.growth.compressed():
        raise PreconditionError(f"requested type {gv} disagrees with the computed type {flag.growth}")
    source = flag.growth
    growth = source.compressed()
    x = D.base_point
    lam = D.coframe_matrix()
    spanning_values = [X.value_at(x) for X in flag.spanning]
    curvatures = [form.exterior_derivative_at(x) for form in D.coframe]

    labels: List[Label] = []
    tau: Dict[Label, Vector] = {}
    eta: Dict[Label, Vector] = {}
    zeta: Dict[Label, Vector] = {}
    brackets: Dict[Label, Vector] = {}

    level = 0
    for s in range(1, source.step + 1):
        p_s = source.jump(s)
        if p_s == 0:
            logger.debug(f"step {s}: zero jump, no vectors chosen")
            continue
        level += 1
        lower = list(flag.basis_upto(s))
        upper = list(flag.basis_upto(s + 1))
        lower_images = [lam.apply(v) for v in lower]
        upper_map = ExactMatrix.from_columns([lam.apply(v) for v in upper], D.p) if upper else None
        accepted: List[Vector] = []
        rank_lower = exact_rank(ExactMatrix.from_columns(lower_images, D.p)) if lower_images else 0
        candidates = _candidates(flag, s, x)
        if pivot_rule == "rightmost":
            candidates.reverse()
        count = 0
        for i, rec in candidates:
            if count == p_s:
                break
            t_vec = spanning_values[i]
            e_vec = rec.field.value_at(x)
            w = _d_lambda(curvatures, t_vec, e_vec)
            if not any(w):
                continue
            coords = solve_particular(upper_map, w)
            if coords is None:
                continue
            stacked = ExactMatrix.from_columns(lower_images + accepted + [w], D.p)
            if exact_rank(stacked) != rank_lower + len(accepted) + 1:
                continue
            count += 1
            label = (level, count)
            z_vec = tuple(sum((c * QQ.convert(v[mu]) for c, v in zip(coords, upper) if c), QQ.zero) for mu in range(D.N))
            labels.append(label)
            tau[label], eta[label], zeta[label] = t_vec, e_vec, z_vec
            brackets[label] = lie_bracket(flag.spanning[i], rec.field).value_at(x)
            accepted.append(w)
            logger.debug(f"frame {label}: tau={t_vec} eta={e_vec} zeta={z_vec}")
        if count < p_s:
            raise SurjectivityError(
                f"step {s}: only {count} of {p_s} independent bracket values found; input is inconsistent"
            ).with_stage("frame")

    Z = ExactMatrix.from_columns([lam.apply(zeta[label]) for label in labels], D.p)
    G = inverse(Z)
    coframe = {
        label: linear_combination(D.coframe, G.row(k)) for k, label in enumerate(labels)
    }
    frame = AdaptedFrameData(
        growth=growth,
        source_growth=source,
        labels=tuple(labels),
        tau=tau,
        eta=eta,
        zeta=zeta,
        brackets=brackets,
        coframe=coframe,
        recombination=G,
        base_point=x,
        pivot_rule=pivot_rule,
    )
    if frame.duality_matrix() != ExactMatrix.identity(D.p):
        raise SurjectivityError("adapted coframe is not dual to the zeta frame").with_stage("frame")
    logger.info(f"adapted frame ({pivot_rule}) with {len(labels)} labels for type {growth}")
    return frame
