"""
Infinitesimal inversion of the horizontality operator along a curve.

solve_S finds S with S o N_u = Id, where N_u is the formal adjoint of the
linearization L_u, by solving A(t) Z = [-Id_p; 0; ...] on a pivot minor of
A(t): among the column sets whose minor is nonzero at t0, one of least degree
in t, the leftmost on ties. build_M returns M_u = S^dagger, so L_u o M_u = Id
wherever the pivot minor stays nonzero.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Poly, QQ

from exactalg import (
    TIME_RING,
    ArityMismatchError,
    ExactMatrix,
    NotRegularError,
    determinant,
    horner_evaluate,
    partial,
    pivot_columns,
)
from geometry import Distribution
from jets import PolyCurve
from regmat import RegularityVerdict, build_A, is_W_regular

from .diff_op import FRAC, DiffOp, apply, monomial_inputs, numeric_residual, op_adjoint, op_compose

logger = logging.getLogger(__name__)

DEFAULT_TEST_DEGREE = 3
# above this many column sets, pivots come from a degree-ordered elimination
MAX_MINOR_CANDIDATES = 512


def compose_with_curve(f: Any, u: PolyCurve) -> Any:
    """f(u(t)) in QQ[t]"""
    return horner_evaluate(f, list(u.components), TIME_RING.zero)


def linearization(D: Distribution, u: PolyCurve) -> DiffOp:
    """L_u = L^0 + L^1 d_t with L^0 = (sum_nu d_mu lambda^s_nu(u) du^nu/dt), L^1 = (lambda^s_mu(u))"""
    if u.arity != D.N:
        raise ArityMismatchError(f"curve in R^{u.arity} for a distribution on R^{D.N}")
    du = u.derivative().components
    L0, L1 = [], []
    for form in D.coframe:
        L1.append([compose_with_curve(c, u) for c in form.coefficients])
        row = []
        for mu in range(D.N):
            total = TIME_RING.zero
            for nu, c in enumerate(form.coefficients):
                if du[nu]:
                    d = partial(c, mu)
                    if d:
                        total += compose_with_curve(d, u) * du[nu]
            row.append(total)
        L0.append(row)
    return DiffOp(
        (ExactMatrix.from_rows(L0, FRAC, cols=D.N), ExactMatrix.from_rows(L1, FRAC, cols=D.N)),
        D.N, D.p,
    )


@dataclass(frozen=True)
class WorkingInterval:
    """Open interval around t0 free of roots of the pivot minor; None means unbounded"""

    lower: Optional[Any]
    upper: Optional[Any]

    def contains(self, t: Any) -> bool:
        t = QQ.convert(t)
        return (self.lower is None or self.lower < t) and (self.upper is None or t < self.upper)

    def to_dict(self) -> Dict[str, Optional[str]]:
        return {
            "lower": None if self.lower is None else str(self.lower),
            "upper": None if self.upper is None else str(self.upper),
        }

    def __str__(self) -> str:
        lo = "-inf" if self.lower is None else str(self.lower)
        hi = "+inf" if self.upper is None else str(self.upper)
        return f"({lo}, {hi})"


def working_interval(denominator: Any, t0: Any) -> WorkingInterval:
    """Bounds from exact isolating intervals of the real roots of the denominator"""
    t0 = QQ.convert(t0)
    if denominator.is_ground:
        return WorkingInterval(None, None)
    poly = Poly(denominator.as_expr(), *TIME_RING.symbols)
    lower, upper = None, None
    for (a, b), _ in poly.intervals():
        a, b = QQ.convert(a), QQ.convert(b)
        while a <= t0 <= b and a != b:
            a, b = (QQ.convert(x) for x in poly.refine_root(a, b, eps=(b - a) / 4))
        if a == b == t0:
            raise NotRegularError(f"pivot minor vanishes at t0 = {t0}")
        if b < t0:
            lower = b if lower is None else max(lower, b)
        else:
            upper = a if upper is None else min(upper, a)
    return WorkingInterval(lower, upper)


@dataclass(frozen=True)
class InversionResult:
    S: DiffOp
    M: DiffOp
    L: DiffOp
    q: int
    t0: Any
    pivots: Tuple[int, ...]
    denominator: Any
    interval: WorkingInterval
    verdict: Optional[RegularityVerdict] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "t0": str(self.t0),
            "order_S": self.S.order,
            "order_M": self.M.order,
            "pivots": list(self.pivots),
            "pivot_minor": str(self.denominator.as_expr()) if self.denominator is not None else "1",
            "working_interval": self.interval.to_dict(),
        }


def _require_regular(D: Distribution, u: PolyCurve, t0: Any, q: int) -> RegularityVerdict:
    verdict = is_W_regular(D, u.jet(t0, q + 1), q)
    if not verdict.regular:
        raise NotRegularError(
            f"jet at t0 = {t0} is not W-regular at q = {q} ({verdict.reason}, rank {verdict.rank}/{verdict.expected_rank})",
            stage="regularity",
        )
    return verdict


def _entry_degree(x: Any) -> int:
    return x.degree() if x else -1


def select_pivots(A: ExactMatrix, A_t0: ExactMatrix) -> Tuple[int, ...]:
    """
    Columns of a square minor of the symbolic A nonzero at t0, of least degree in t.

    Candidates are taken in lexicographic order, so ties keep the leftmost set.
    When there are more than MAX_MINOR_CANDIDATES sets, columns are ordered by
    their largest entry degree and the pivots of A(t0) in that order are kept.
    """
    rows, cols = A.rows, A.cols
    if comb(cols, rows) > MAX_MINOR_CANDIDATES:
        order = sorted(range(cols), key=lambda j: (max(_entry_degree(x) for x in A.column(j)), j))
        reordered = A_t0.submatrix(range(rows), order)
        chosen = sorted(order[k] for k in pivot_columns(reordered))
        logger.debug(f"{comb(cols, rows)} column sets; degree-ordered pivots {chosen}")
        return tuple(chosen)
    best, best_degree = None, None
    for cand in combinations(range(cols), rows):
        if not determinant(A_t0.submatrix(range(rows), cand)):
            continue
        d = determinant(A.submatrix(range(rows), cand)).degree()
        if best_degree is None or d < best_degree:
            best, best_degree = cand, d
            if d == 0:
                break
    if best is None:
        raise NotRegularError("no maximal minor of A is nonzero at t0", stage="inversion")
    return best


def invert(D: Distribution, u: PolyCurve, t0: Any, q: int) -> InversionResult:
    """S, M_u and the data of the chart on which they are valid"""
    t0 = QQ.convert(t0)
    L = linearization(D, u)
    N, p = D.N, D.p
    if p == 0:
        empty = DiffOp.zero(0, N, q)
        return InversionResult(empty, op_adjoint(empty), L, q, t0, (), None, WorkingInterval(None, None))
    verdict = _require_regular(D, u, t0, q)
    A = build_A(D, u.symbolic_jet(q + 1), q).matrix
    pivots = select_pivots(A, build_A(D, u.jet(t0, q + 1), q).matrix)
    minor = A.submatrix(range(A.rows), pivots).to_domain_matrix()
    inv, den = minor.adj_det()
    inv_rows = inv.to_list()
    den_fraction = FRAC.convert(den)
    Z = [[FRAC.zero] * p for _ in range(A.cols)]
    for k, col in enumerate(pivots):
        for s in range(p):
            if inv_rows[k][s]:
                Z[col][s] = -FRAC.convert(inv_rows[k][s]) / den_fraction
    coefficients = tuple(
        ExactMatrix.from_rows([[Z[m * N + mu][s] for mu in range(N)] for s in range(p)], FRAC, cols=N)
        for m in range(q + 1)
    )
    S = DiffOp(coefficients, N, p)
    interval = working_interval(den, t0)
    logger.info(f"solved S of order {q} with pivot minor {den.as_expr()} on {interval}")
    return InversionResult(S, op_adjoint(S), L, q, t0, tuple(pivots), den, interval, verdict)


def solve_S(D: Distribution, u: PolyCurve, t0: Any, q: int) -> DiffOp:
    """Order-q operator with S o N_u = Id near t0"""
    return invert(D, u, t0, q).S


def build_M(D: Distribution, u: PolyCurve, t0: Any, q: int) -> DiffOp:
    """Right inverse M_u = S^dagger of L_u, of order q"""
    return invert(D, u, t0, q).M


@dataclass
class ResidualReport:
    degree: int
    residuals: List[Dict[str, Any]] = field(default_factory=list)
    numeric: Optional[float] = None

    @property
    def exact_zero(self) -> bool:
        return all(not any(r["values"]) for r in self.residuals)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "exact_zero": self.exact_zero,
            "numeric_max": self.numeric,
            "residuals": [
                {"component": r["component"], "power": r["power"], "values": [str(FRAC.to_sympy(v)) for v in r["values"]]}
                for r in self.residuals
            ],
        }


def verify_right_inverse(
    L: DiffOp, M: DiffOp, degree: int = DEFAULT_TEST_DEGREE, grid: Optional[Sequence[float]] = None
) -> ResidualReport:
    """Exact (L o M) P - P on e_i t^k for k <= degree; optional float cross-check on a grid"""
    composite = op_compose(L, M)
    report = ResidualReport(degree)
    for i, k, P in monomial_inputs(composite.source, degree):
        image = apply(composite, P)
        report.residuals.append({"component": i, "power": k, "values": tuple(a - b for a, b in zip(image, P))})
    if grid is not None and composite.source:
        report.numeric = numeric_residual(composite, DiffOp.identity(composite.source), grid, degree)
    logger.debug(f"right-inverse residuals through degree {degree}: exact zero = {report.exact_zero}")
    return report


def sample_grid(interval: WorkingInterval, t0: Any, points: int = 9) -> List[float]:
    """Float grid around t0 inside the working interval"""
    t0 = QQ.convert(t0)
    grid = []
    for k in range(-(points // 2), points // 2 + 1):
        t = t0 + QQ(k, 8)
        if interval.contains(t):
            grid.append(float(t))
    return grid
