"""
Sub-frame schedules and the bounds q(m, K).

Every column-block of A gets a prescribed sub-frame: the full zeta frame, or
zeta without its level-(s-1) vectors followed by eta^{s,j}. Alongside, each
jet level q gets tau^q, zero or one of the tau^{s,j}, which fixes where the
indeterminate X_q enters D^{q+1}. Growth vectors are compressed first, so
every level of the schedule has a nonzero jump.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from exactalg import IndexRangeError, PreconditionError
from geometry import GrowthVector
from jets import TauAssignment, TauLabel
from regmat import min_q

logger = logging.getLogger(__name__)


class FrameKind(Enum):
    FULL_ZETA = "full_zeta"
    ZETA_HAT_WITH_ETA = "zeta_hat_with_eta"


@dataclass(frozen=True)
class FrameLabel:
    """Sub-frame prescribed for one column-block"""

    kind: FrameKind = FrameKind.FULL_ZETA
    s: int = 0
    j: int = 0

    @classmethod
    def full_zeta(cls) -> "FrameLabel":
        return cls()

    @classmethod
    def hat(cls, s: int, j: int) -> "FrameLabel":
        return cls(FrameKind.ZETA_HAT_WITH_ETA, s, j)

    @property
    def is_full(self) -> bool:
        return self.kind is FrameKind.FULL_ZETA

    def width(self, gv: GrowthVector) -> int:
        if self.is_full:
            return gv.corank
        return gv.corank - gv.jump(self.s - 1) + 1

    def __str__(self) -> str:
        if self.is_full:
            return "zeta^*"
        zeta = "zeta^*" if self.s == 1 else f"zeta-hat^{{{self.s - 1},*}}"
        return f"({zeta}, eta^{{{self.s},{self.j}}})"


@dataclass
class ScheduleState:
    """Mutable bookkeeping while the sub-frame algorithms run"""

    growth: GrowthVector
    labels: Dict[int, FrameLabel] = field(default_factory=dict)
    tau: TauAssignment = field(default_factory=TauAssignment)
    designated: Dict[int, int] = field(default_factory=dict)

    @property
    def r(self) -> int:
        return len(self.growth.jumps)

    def p(self, s: int) -> int:
        return self.growth.jump(s) if s >= 1 else 0


def choose_subframe(state: ScheduleState, q: int, s: int, j: int, d: int) -> int:
    """
    Prescribe (zeta-hat^{s-1}, eta^{s,j}) at block q and recurse into level s-1.

    Returns the last block labeled. With d > 0 the tau vector moves d levels
    back, onto a block that was just given the full zeta frame.
    """
    if not 1 <= s <= state.r:
        raise IndexRangeError(f"level s = {s} outside 1..{state.r}")
    if not 1 <= j <= state.p(s):
        raise IndexRangeError(f"index j = {j} outside 1..{state.p(s)} at level {s}")
    if d < 0 or q - d < 0:
        raise IndexRangeError(f"shift d = {d} invalid at block {q}")
    if d == 0:
        state.tau[q] = TauLabel.tau(s, j)
    else:
        state.tau[q] = TauLabel.zero()
        state.tau[q - d] = TauLabel.tau(s, j)
    state.labels[q] = FrameLabel.hat(s, j)
    state.designated[q] = q - d
    q0_local = q
    for a in range(1, state.p(s - 1) + 1):
        for b in range(1, q0_local + 2):
            state.labels[q + b] = FrameLabel.full_zeta()
            state.tau[q + b] = TauLabel.zero()
        q = choose_subframe(state, q + q0_local + 2, s - 1, a, q0_local + 1)
    return q


def choose_all_subframes(state: ScheduleState, q_start: int, gv: Optional[GrowthVector] = None) -> int:
    """Run choose_subframe for every (s, j) from block q_start on; returns the last block"""
    gv = state.growth if gv is None else gv.compressed()
    if gv != state.growth:
        raise PreconditionError(f"growth vector {gv} does not match the schedule state {state.growth}")
    missing = [b for b in range(q_start) if b not in state.labels]
    if missing:
        raise PreconditionError(f"blocks {missing} must be labeled before starting at {q_start}")
    q = q_start
    for s in range(1, state.r + 1):
        for j in range(1, state.p(s) + 1):
            q = choose_subframe(state, q, s, j, 0) + 1
    logger.debug(f"sub-frames chosen for blocks {q_start}..{q - 1}")
    return q - 1


@dataclass(frozen=True)
class SubframeSchedule:
    growth: GrowthVector
    q0: int
    labels: Tuple[FrameLabel, ...]
    tau: TauAssignment
    designated: Dict[int, int]
    q_values: Tuple[int, ...]

    @property
    def q_final(self) -> int:
        return len(self.labels) - 1

    @property
    def K(self) -> int:
        return len(self.q_values)

    def widths(self) -> List[int]:
        return [label.width(self.growth) for label in self.labels]

    def width_sum(self) -> int:
        return sum(self.widths())

    def hat_blocks(self) -> List[int]:
        return [q for q, label in enumerate(self.labels) if not label.is_full]

    def variables(self) -> Tuple[int, ...]:
        """Jet levels carrying an indeterminate, i.e. nonzero tau^q"""
        return self.tau.nonzero_levels()

    def round_variables(self) -> Tuple[int, ...]:
        """Indeterminates designated by the hat blocks of this layout"""
        return tuple(sorted(set(self.designated.values())))

    def levels(self) -> List[Dict]:
        """q and width sum of the B_k layout for each round k"""
        out = []
        for k in range(1, self.K + 1):
            level = level_schedule(self, k)
            out.append({"k": k, "q": level.q_final, "width_sum": level.width_sum(), "size": self.growth.corank * (level.q_final + 2)})
        return out

    def to_dict(self) -> Dict:
        return {
            "growth": list(self.growth.m),
            "q0": self.q0,
            "q_values": list(self.q_values),
            "q_final": self.q_final,
            "width_sum": self.width_sum(),
            "labels": label_table(self),
            "tau": {str(q): str(label) for q, label in self.tau.items()},
            "designated": {str(q): d for q, d in sorted(self.designated.items())},
            "levels": self.levels(),
        }


def _freeze(state: ScheduleState, q0: int, q_values: List[int]) -> SubframeSchedule:
    last = max(state.labels)
    if sorted(state.labels) != list(range(last + 1)):
        raise PreconditionError("schedule has unlabeled blocks")
    return SubframeSchedule(
        state.growth, q0, tuple(state.labels[b] for b in range(last + 1)),
        state.tau.copy(), dict(state.designated), tuple(q_values),
    )


def build_schedule(gv: GrowthVector, K: int = 1, q0: Optional[int] = None) -> SubframeSchedule:
    """Blocks 0..q0 full zeta with tau = 0, then K rounds of choose_all_subframes"""
    if K < 1:
        raise PreconditionError(f"K must be at least 1, got {K}")
    growth = gv.compressed()
    if growth.corank == 0:
        raise PreconditionError("a schedule needs a distribution of positive corank")
    q0 = min_q(growth.rank, growth.corank) if q0 is None else q0
    if q0 < min_q(growth.rank, growth.corank):
        raise PreconditionError(f"q0 = {q0} is below min_q = {min_q(growth.rank, growth.corank)}")
    state = ScheduleState(growth)
    for b in range(q0 + 1):
        state.labels[b] = FrameLabel.full_zeta()
    q = q0
    q_values = []
    for _ in range(K):
        q = choose_all_subframes(state, q + 1)
        q_values.append(q)
    schedule = _freeze(state, q0, q_values)
    logger.info(f"schedule for {growth}: q values {q_values}, width sum {schedule.width_sum()}")
    return schedule


def q_bound(gv: GrowthVector, K: int = 1) -> int:
    """q(m, K)"""
    return build_schedule(gv, K).q_values[-1]


def extend_schedule(schedule: SubframeSchedule, alpha: int) -> SubframeSchedule:
    """Pad with full-zeta blocks and tau = 0 up to block alpha"""
    if alpha < schedule.q_final:
        raise PreconditionError(f"cannot shrink a schedule ending at {schedule.q_final} to {alpha}")
    padding = (FrameLabel.full_zeta(),) * (alpha - schedule.q_final)
    return SubframeSchedule(
        schedule.growth, schedule.q0, schedule.labels + padding,
        schedule.tau.copy(), dict(schedule.designated), schedule.q_values,
    )


def level_schedule(schedule: SubframeSchedule, k: int) -> SubframeSchedule:
    """
    Layout of B_k: full zeta through q(m, k-1), then the blocks of round k.

    The tau assignment keeps every round up to q(m, k) so all P_k live on
    the same tangency fiber; the designated map keeps round k only.
    """
    if not 1 <= k <= schedule.K:
        raise IndexRangeError(f"level {k} outside 1..{schedule.K}")
    start = schedule.q0 if k == 1 else schedule.q_values[k - 2]
    last = schedule.q_values[k - 1]
    labels = tuple(
        FrameLabel.full_zeta() if b <= start else schedule.labels[b] for b in range(last + 1)
    )
    tau = TauAssignment({q: label for q, label in schedule.tau.items() if q <= last})
    designated = {b: d for b, d in schedule.designated.items() if start < b <= last}
    return SubframeSchedule(schedule.growth, start, labels, tau, designated, schedule.q_values[:k])


def label_table(schedule: SubframeSchedule) -> List[str]:
    """One line per hat block or run of full-zeta blocks"""
    lines = []
    q = 0
    labels = schedule.labels
    while q < len(labels):
        label = labels[q]
        if label.is_full:
            end = q
            while end + 1 < len(labels) and labels[end + 1].is_full:
                end += 1
            where = f"column-block {q}" if end == q else f"column-blocks {q} to {end}"
            lines.append(f"Pick {label} for {where}")
            q = end + 1
        else:
            lines.append(f"Pick {label} for column-block {q}")
            q += 1
    return lines


def tau_table(schedule: SubframeSchedule) -> List[str]:
    return [f"tau^{q} = {label}" for q, label in schedule.tau.items()]
