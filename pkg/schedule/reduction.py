"""
The square matrix B, its reduction to C and the structure certificate.

B keeps, in every column-block of A (written in the adapted coframe), only
the columns of the prescribed sub-frame. Each zeta column carries a unit
pivot in the Lambda block below the diagonal; clearing the entries above
those pivots from the bottom-right corner up and deleting pivot rows and
columns leaves C with det B = +-det C. The columns of C are the eta
columns, one per hat block, and its rows are row-block 0 plus the
level-(s-1) Lambda rows under each hat block with s >= 2.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import QQ

from exactalg import (
    ExactMatrix,
    InsufficientJetOrderError,
    MissingPivotError,
    PreconditionError,
    StructureViolationError,
    WidthMismatchError,
    exact_rank,
    indeterminate_index,
    reduce_mod,
)
from geometry import AdaptedFrameData, Distribution
from jets import CurveJet, fiber_point
from regmat import build_A

from .subframes import FrameLabel, SubframeSchedule

logger = logging.getLogger(__name__)

DEFAULT_MODULUS = 2**31 - 1

Label = Tuple[int, int]
Vector = Tuple[Any, ...]


@dataclass(frozen=True)
class ColumnTag:
    block: int
    kind: str
    label: Label

    def __str__(self) -> str:
        return f"{self.kind}^{{{self.label[0]},{self.label[1]}}}@{self.block}"


@dataclass(frozen=True)
class RowTag:
    block: int
    label: Label

    def __str__(self) -> str:
        return f"lambda^{{{self.label[0]},{self.label[1]}}}@{self.block}"


def subframe_vectors(frame: AdaptedFrameData, label: FrameLabel) -> List[Tuple[ColumnTag, Vector]]:
    """Prescribed vectors of a column-block, tagged with block -1 (filled in by the caller)"""
    if label.is_full:
        return [(ColumnTag(-1, "zeta", b), frame.zeta[b]) for b in frame.labels]
    kept = [(ColumnTag(-1, "zeta", b), frame.zeta[b]) for b in frame.labels if b[0] != label.s - 1]
    return kept + [(ColumnTag(-1, "eta", (label.s, label.j)), frame.eta[(label.s, label.j)])]


def adapted_distribution(D: Distribution, frame: AdaptedFrameData) -> Distribution:
    """D with the coframe lambda^{s,j} of the adapted frame"""
    return D.recombined(frame.recombination.tolist(), name=D.name)


def _check_inputs(frame: AdaptedFrameData, schedule: SubframeSchedule, jet: CurveJet) -> None:
    if schedule.growth != frame.growth:
        raise PreconditionError(f"schedule for {schedule.growth} used with a frame of type {frame.growth}")
    if jet.order < schedule.q_final + 1:
        raise InsufficientJetOrderError(
            f"B for q = {schedule.q_final} needs a jet of order {schedule.q_final + 1}, got {jet.order}"
        )


def _column(A: ExactMatrix, block: int, N: int, v: Vector) -> List[Any]:
    out = []
    offset = block * N
    for row in A.entries:
        total = A.domain.zero
        for mu, x in enumerate(v):
            if x:
                a = row[offset + mu]
                if a:
                    total += a * x
        out.append(total)
    return out


@dataclass(frozen=True)
class BMatrix:
    matrix: ExactMatrix
    columns: Tuple[ColumnTag, ...]
    rows: Tuple[RowTag, ...]
    schedule: SubframeSchedule
    p: int
    labels: Tuple[Label, ...]

    @property
    def size(self) -> int:
        return self.matrix.rows

    def pivots(self) -> List[Tuple[int, int]]:
        """(row, column) of the unit entries under each zeta column"""
        index = {label: k for k, label in enumerate(self.labels)}
        return [
            ((tag.block + 1) * self.p + index[tag.label], c)
            for c, tag in enumerate(self.columns) if tag.kind == "zeta"
        ]


def build_B(
    D: Distribution, frame: AdaptedFrameData, schedule: SubframeSchedule, jet: CurveJet
) -> BMatrix:
    """Square submatrix of A_1 on the prescribed columns"""
    _check_inputs(frame, schedule, jet)
    q = schedule.q_final
    adapted = adapted_distribution(D, frame)
    A = build_A(adapted, jet.truncate(q + 1), q).matrix
    columns: List[List[Any]] = []
    tags: List[ColumnTag] = []
    for block, label in enumerate(schedule.labels):
        for tag, v in subframe_vectors(frame, label):
            tags.append(ColumnTag(block, tag.kind, tag.label))
            columns.append(_column(A, block, D.N, v))
    if len(columns) != A.rows:
        raise WidthMismatchError(f"width sum {len(columns)} differs from the row count {A.rows} = p(q+2)")
    rows = tuple(RowTag(k, label) for k in range(q + 2) for label in frame.labels)
    B = ExactMatrix(A.rows, A.rows, tuple(tuple(c[i] for c in columns) for i in range(A.rows)), A.domain)
    logger.debug(f"B is {B.rows}x{B.cols} for q = {q}")
    return BMatrix(B, tuple(tags), rows, schedule, D.p, frame.labels)


def extend_to_frame(vectors: Sequence[Vector], N: int) -> List[Vector]:
    """Append standard basis vectors by leftmost pivoting until the vectors span R^N"""
    frame = [tuple(QQ.convert(x) for x in v) for v in vectors]
    rank = exact_rank(ExactMatrix.from_columns(frame, N)) if frame else 0
    if rank != len(frame):
        raise PreconditionError("prescribed sub-frame is dependent")
    for i in range(N):
        if rank == N:
            break
        e = tuple(QQ.one if k == i else QQ.zero for k in range(N))
        candidate = ExactMatrix.from_columns(frame + [e], N)
        if exact_rank(candidate) > rank:
            frame.append(e)
            rank += 1
    return frame


def build_A1(
    D: Distribution, frame: AdaptedFrameData, schedule: SubframeSchedule, jet: CurveJet
) -> Tuple[ExactMatrix, List[int]]:
    """A with every column-block rewritten in an extended sub-frame, plus the prescribed column indices"""
    _check_inputs(frame, schedule, jet)
    q = schedule.q_final
    A = build_A(adapted_distribution(D, frame), jet.truncate(q + 1), q).matrix
    columns: List[List[Any]] = []
    prescribed: List[int] = []
    for block, label in enumerate(schedule.labels):
        vectors = [v for _, v in subframe_vectors(frame, label)]
        full = extend_to_frame(vectors, D.N)
        for k, v in enumerate(full):
            if k < len(vectors):
                prescribed.append(len(columns))
            columns.append(_column(A, block, D.N, v))
    A1 = ExactMatrix(A.rows, len(columns), tuple(tuple(c[i] for c in columns) for i in range(A.rows)), A.domain)
    return A1, prescribed


@dataclass
class CReduction:
    """C after the pivot eliminations; det B = sign * det C"""

    C: Any
    rows: List[int]
    columns: List[int]
    row_tags: List[RowTag]
    column_tags: List[ColumnTag]
    sign: int
    backend: str
    modulus: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.rows)


def _deletion_sign(pivots: Sequence[Tuple[int, int]]) -> int:
    sign = 1
    deleted_rows: List[int] = []
    deleted_cols: List[int] = []
    for r, c in pivots:
        cur_r = r - sum(1 for x in deleted_rows if x < r)
        cur_c = c - sum(1 for x in deleted_cols if x < c)
        if (cur_r + cur_c) % 2:
            sign = -sign
        deleted_rows.append(r)
        deleted_cols.append(c)
    return sign


def _ordered_pivots(B: BMatrix) -> List[Tuple[int, int]]:
    return sorted(B.pivots(), key=lambda rc: (-B.columns[rc[1]].block, -rc[0]))


def _kept(B: BMatrix, pivots: Sequence[Tuple[int, int]]) -> Tuple[List[int], List[int]]:
    pivot_rows = {r for r, _ in pivots}
    pivot_cols = {c for _, c in pivots}
    rows = [i for i in range(B.size) if i not in pivot_rows]
    cols = [j for j in range(B.size) if j not in pivot_cols]
    if len(rows) != len(cols):
        raise WidthMismatchError(f"C would be {len(rows)}x{len(cols)}")
    return rows, cols


def reduce_to_C(B: BMatrix) -> CReduction:
    """Exact reduction over the domain of B"""
    M = [list(r) for r in B.matrix.entries]
    domain = B.matrix.domain
    pivots = _ordered_pivots(B)
    for r, c in pivots:
        if M[r][c] != domain.one:
            raise MissingPivotError(f"entry ({r},{c}) under {B.columns[c]} is {M[r][c]}, expected 1")
        pivot_row = M[r]
        support = [j for j, x in enumerate(pivot_row) if x]
        for i in range(r):
            f = M[i][c]
            if f:
                row = M[i]
                for j in support:
                    row[j] = row[j] - f * pivot_row[j]
    for r, c in pivots:
        if any(M[i][c] for i in range(B.size) if i != r):
            raise MissingPivotError(f"column {c} under {B.columns[c]} is not cleared")
    rows, cols = _kept(B, pivots)
    C = ExactMatrix(len(rows), len(cols), tuple(tuple(M[i][j] for j in cols) for i in rows), domain)
    logger.debug(f"reduced {B.size}x{B.size} B to {C.rows}x{C.cols} C")
    return CReduction(
        C, rows, cols, [B.rows[i] for i in rows], [B.columns[j] for j in cols], _deletion_sign(pivots), "exact"
    )


def modular_matrix(M: ExactMatrix, modulus: int = DEFAULT_MODULUS) -> np.ndarray:
    """Residues of a rational matrix as int64"""
    return np.array(
        [[reduce_mod(x, modulus) for x in row] for row in M.entries], dtype=np.int64
    ).reshape(M.rows, M.cols)


def reduce_to_C_modular(B: BMatrix, modulus: int = DEFAULT_MODULUS) -> CReduction:
    """Reduction of a rational B modulo a prime below 2^31"""
    if getattr(B.matrix.domain, "is_PolynomialRing", False):
        raise PreconditionError("modular reduction needs a rational B; specialize the jet first")
    M = modular_matrix(B.matrix, modulus)
    pivots = _ordered_pivots(B)
    for r, c in pivots:
        if M[r, c] != 1:
            raise MissingPivotError(f"entry ({r},{c}) under {B.columns[c]} is {M[r, c]} mod {modulus}, expected 1")
        factors = M[:r, c].copy()
        nz = np.nonzero(factors)[0]
        if nz.size:
            M[nz] = (M[nz] - np.outer(factors[nz], M[r]) % modulus) % modulus
    rows, cols = _kept(B, pivots)
    C = M[np.ix_(rows, cols)] if rows else np.zeros((0, 0), dtype=np.int64)
    return CReduction(
        C, rows, cols, [B.rows[i] for i in rows], [B.columns[j] for j in cols],
        _deletion_sign(pivots), "modular", modulus,
    )


def modular_det(M: np.ndarray, modulus: int = DEFAULT_MODULUS) -> int:
    """Determinant modulo a prime by Gaussian elimination"""
    A = np.array(M, dtype=np.int64) % modulus
    n = A.shape[0]
    det = 1
    for k in range(n):
        nz = np.nonzero(A[k:, k])[0]
        if nz.size == 0:
            return 0
        i = k + int(nz[0])
        if i != k:
            A[[k, i]] = A[[i, k]]
            det = -det
        pivot = int(A[k, k])
        det = det * pivot % modulus
        inv = pow(pivot, -1, modulus)
        below = A[k + 1:, k] * inv % modulus
        A[k + 1:] = (A[k + 1:] - np.outer(below, A[k]) % modulus) % modulus
    return det % modulus


def signed_residue(value: int, modulus: int) -> int:
    value %= modulus
    return value - modulus if value > modulus // 2 else value


@dataclass
class CStructureReport:
    """Designated entries of C and the triangular certificate for C-tilde"""

    valid: bool
    mode: str
    size: int
    designated: List[Dict[str, Any]] = field(default_factory=list)
    permutation: List[int] = field(default_factory=list)
    ctilde: List[List[str]] = field(default_factory=list)
    violations: List[Dict[str, Any]] = field(default_factory=list)
    det_ctilde: Optional[str] = None

    def raise_if_invalid(self) -> None:
        if not self.valid:
            first = self.violations[0]
            raise StructureViolationError(first["message"], first.get("row"), first.get("column")).with_stage("structure")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "valid": self.valid,
            "mode": self.mode,
            "size": self.size,
            "designated": self.designated,
            "permutation": self.permutation,
            "ctilde": self.ctilde,
            "violations": self.violations,
            "det_ctilde": self.det_ctilde,
        }


def designated_variables(reduction: CReduction, schedule: SubframeSchedule) -> List[int]:
    """X index attached to each column of C through its hat block"""
    return [schedule.designated[tag.block] for tag in reduction.column_tags]


def _finish(report: CStructureReport, rows_of: Dict[int, int], coefficients: Dict[int, Any],
            ctilde_zero: Callable[[int, int], bool]) -> CStructureReport:
    n = report.size
    if len(set(rows_of.values())) != len(rows_of) or len(rows_of) != n:
        report.violations.append({"row": None, "column": None, "message": "designated rows are not a bijection"})
    if not report.violations:
        perm = [0] * n
        for c, r in rows_of.items():
            perm[r] = c
        for k in range(n):
            for i in range(k + 1, n):
                if not ctilde_zero(i, perm[k]):
                    report.violations.append(
                        {"row": i, "column": perm[k], "message": "C-tilde is not triangular after permutation"}
                    )
        report.permutation = perm
        det = 1
        for k in range(n):
            det *= int(coefficients[perm[k]])
        report.det_ctilde = str(det)
    report.valid = not report.violations
    return report


def check_C_structure(reduction: CReduction, schedule: SubframeSchedule) -> CStructureReport:
    """
    Exact check on a C with polynomial entries in the X_q.

    For every column the designated row is the lowest one whose entry
    involves the column's variable; that entry must be c X_q plus terms in
    X_1..X_{q-1} only, with c a nonzero integer, and X_q may not occur
    further left.
    """
    C = reduction.C
    n = C.rows
    report = CStructureReport(False, "symbolic", n)
    if n == 0:
        report.valid, report.det_ctilde = True, "1"
        return report
    ring = getattr(C.domain, "ring", None)
    variables = designated_variables(reduction, schedule)
    positions = {indeterminate_index(ring, k): k for k in range(ring.ngens)} if ring is not None else {}
    rows_of: Dict[int, int] = {}
    coefficients: Dict[int, Any] = {}
    ctilde = [["0"] * n for _ in range(n)]
    derivative: Dict[Tuple[int, int], Any] = {}
    for c, v in enumerate(variables):
        if v not in positions:
            report.violations.append({"row": None, "column": c, "message": f"X{v} does not occur in C"})
            continue
        gen = ring.gens[positions[v]]
        for i in range(n):
            d = C[i, c].diff(gen)
            derivative[(i, c)] = d
            if d:
                ctilde[i][c] = str(d.as_expr()) if d.is_ground else "?"
        occurring = [i for i in range(n) if derivative[(i, c)]]
        if not occurring:
            report.violations.append({"row": None, "column": c, "message": f"X{v} does not occur in its column"})
            continue
        r = occurring[-1]
        d = derivative[(r, c)]
        if not d.is_ground or C[r, c].degree(gen) != 1:
            report.violations.append({"row": r, "column": c, "message": f"X{v} is not linear with an integer coefficient"})
            continue
        coefficient = QQ.convert(d.LC)
        if coefficient.denominator != 1:
            report.violations.append({"row": r, "column": c, "message": f"coefficient {coefficient} of X{v} is not an integer"})
            continue
        rest = C[r, c] - d * gen
        later = [
            indeterminate_index(ring, k) for k in range(ring.ngens)
            if indeterminate_index(ring, k) >= v and rest.degree(ring.gens[k]) > 0
        ]
        if later:
            report.violations.append(
                {"row": r, "column": c, "message": f"entry beside c X{v} involves X{', X'.join(map(str, later))}"}
            )
        for i in range(n):
            for j in range(c):
                if C[i, j] and C[i, j].degree(gen) > 0:
                    report.violations.append({"row": i, "column": j, "message": f"X{v} occurs left of its column"})
        rows_of[c] = r
        coefficients[c] = coefficient
        report.designated.append(
            {"row": r, "column": c, "variable": v, "coefficient": str(coefficient), "block": reduction.column_tags[c].block}
        )
    report.ctilde = ctilde
    return _finish(report, rows_of, coefficients, lambda i, c: not derivative.get((i, c)))


def evaluation_C(
    D: Distribution,
    frame: AdaptedFrameData,
    schedule: SubframeSchedule,
    first_jet: Sequence[Any],
    modulus: int = DEFAULT_MODULUS,
) -> Callable[[Mapping[int, Any]], Tuple[np.ndarray, CReduction]]:
    """X assignment -> C mod p, through the rational fiber point"""
    q = schedule.q_final

    def evaluate(values: Mapping[int, Any]) -> Tuple[np.ndarray, CReduction]:
        jet = fiber_point(D, first_jet, q, schedule.tau, values, frame)
        reduction = reduce_to_C_modular(build_B(D, frame, schedule, jet), modulus)
        return reduction.C, reduction

    return evaluate


def check_C_structure_by_evaluation(
    evaluate: Callable[[Mapping[int, Any]], Tuple[np.ndarray, CReduction]],
    schedule: SubframeSchedule,
    rng: Optional[random.Random] = None,
    bound: int = 2**20,
    modulus: int = DEFAULT_MODULUS,
) -> CStructureReport:
    """
    Same certificate from finite differences of C mod p in each X_q.

    Occurrence of X_q means a nonzero first difference at one of two random
    base points; linearity with a constant coefficient means equal first
    differences at both points and a vanishing second difference. A designated
    entry may not move with any later X_w.
    """
    rng = rng or random.Random(0)
    variables_all = schedule.variables()
    base = {v: rng.randint(1, bound) for v in variables_all}
    other = {v: rng.randint(1, bound) for v in variables_all}
    C0, reduction = evaluate(base)
    C1, _ = evaluate(other)
    n = C0.shape[0]
    report = CStructureReport(False, "evaluation", n)
    if n == 0:
        report.valid, report.det_ctilde = True, "1"
        return report
    variables = designated_variables(reduction, schedule)
    rows_of: Dict[int, int] = {}
    coefficients: Dict[int, int] = {}
    ctilde = [["0"] * n for _ in range(n)]
    first_diff: Dict[int, np.ndarray] = {}
    d1: Dict[int, np.ndarray] = {}
    d1b: Dict[int, np.ndarray] = {}
    d2: Dict[int, np.ndarray] = {}
    for v in variables_all:
        C_shift = evaluate({**base, v: base[v] + 1})[0]
        d1[v] = (C_shift - C0) % modulus
        d2[v] = (evaluate({**base, v: base[v] + 2})[0] - 2 * C_shift + C0) % modulus
        d1b[v] = (evaluate({**other, v: other[v] + 1})[0] - C1) % modulus
    for c, v in enumerate(variables):
        if v not in d1:
            report.violations.append({"row": None, "column": c, "message": f"X{v} is not a schedule variable"})
            continue
        occurs = (d1[v] != 0) | (d1b[v] != 0)
        first_diff[c] = occurs
        for i in range(n):
            if occurs[i, c]:
                exact = d1[v][i, c] == d1b[v][i, c] and not d2[v][i, c]
                ctilde[i][c] = str(signed_residue(int(d1[v][i, c]), modulus)) if exact else "?"
        rows = np.nonzero(occurs[:, c])[0]
        if rows.size == 0:
            report.violations.append({"row": None, "column": c, "message": f"X{v} does not occur in its column"})
            continue
        r = int(rows[-1])
        if d2[v][r, c] or d1[v][r, c] != d1b[v][r, c]:
            report.violations.append({"row": r, "column": c, "message": f"X{v} is not linear with a constant coefficient"})
            continue
        later = [w for w in variables_all if w > v and (d1[w][r, c] or d1b[w][r, c])]
        if later:
            report.violations.append(
                {"row": r, "column": c, "message": f"entry beside c X{v} involves X{', X'.join(map(str, later))}"}
            )
        left = np.argwhere(occurs[:, :c])
        for i, j in left:
            report.violations.append({"row": int(i), "column": int(j), "message": f"X{v} occurs left of its column"})
        rows_of[c] = r
        coefficients[c] = signed_residue(int(d1[v][r, c]), modulus)
        report.designated.append(
            {"row": r, "column": c, "variable": v, "coefficient": str(coefficients[c]), "block": reduction.column_tags[c].block}
        )
    report.ctilde = ctilde
    return _finish(report, rows_of, coefficients, lambda i, c: not first_diff[c][i, c] if c in first_diff else True)
