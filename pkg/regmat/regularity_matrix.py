"""
The regularity matrix A of a curve jet.

Row-block k (0..q+1) and column-block m (0..q) of A hold

    C(m, k) d_t^{m-k} R_u + C(m, k-1) d_t^{m-k+1} Lambda

where Lambda = (lambda^s_mu o u) and R_u = (d lambda^s(du/dt, d_mu)). The
rule comes from expanding S o N_u = Id with N_u = -R_u^T - Lambda^T d_t.
"""

import logging
from dataclasses import dataclass
from math import comb
from typing import Any, Dict, List, Sequence, Tuple

from sympy import QQ

from exactalg import (
    ExactMatrix,
    InsufficientJetOrderError,
    PreconditionError,
    TruncatedSeries,
    series_compose,
)
from geometry import Distribution, OneForm
from jets import CurveJet, velocity_series

logger = logging.getLogger(__name__)


def binomial(a: int, b: int) -> int:
    """C(a, b), zero outside 0 <= b <= a"""
    if b < 0 or b > a:
        return 0
    return comb(a, b)


def scalar_domain(jet: CurveJet) -> Any:
    return QQ if jet.ring is None else jet.ring.to_domain()


def _derivative_matrices(rows: List[List[TruncatedSeries]], levels: int, domain: Any) -> List[ExactMatrix]:
    N = len(rows[0]) if rows else 0
    return [
        ExactMatrix.from_rows([[series.derivative_at(k) for series in row] for row in rows], domain, cols=N)
        for k in range(levels + 1)
    ]


def curvature_series(coframe: Sequence[OneForm], jet: CurveJet, order: int) -> List[List[TruncatedSeries]]:
    """d lambda^s(du/dt, d_mu) along the jet as series of the given order"""
    u = jet.series(order)
    du = velocity_series(jet, order)
    zero_series = TruncatedSeries.constant(jet.zero, order, jet.zero)
    out = []
    for form in coframe:
        N = form.arity
        row = []
        for mu in range(N):
            total = zero_series
            for nu in range(N):
                if du[nu].is_zero():
                    continue
                c = form.curvature(mu, nu)
                if c:
                    total = total + series_compose(c, u) * du[nu]
            row.append(total)
        out.append(row)
    return out


def block_R_derivatives(coframe: Sequence[OneForm], jet: CurveJet, k_max: int) -> List[ExactMatrix]:
    """d_t^k R_u at t0 for k = 0..k_max; level k uses D^0..D^{k+1}"""
    if k_max < 0:
        raise PreconditionError(f"k_max must be non-negative, got {k_max}")
    if jet.order < k_max + 1:
        raise InsufficientJetOrderError(f"R_u derivatives through {k_max} need a jet of order {k_max + 1}, got {jet.order}")
    if not coframe:
        return [ExactMatrix.zeros(0, jet.arity, scalar_domain(jet)) for _ in range(k_max + 1)]
    return _derivative_matrices(curvature_series(coframe, jet, k_max), k_max, scalar_domain(jet))


def block_Lambda_derivatives(coframe: Sequence[OneForm], jet: CurveJet, k_max: int) -> List[ExactMatrix]:
    """d_t^k Lambda at t0 for k = 0..k_max; level k uses D^0..D^k"""
    if k_max < 0:
        raise PreconditionError(f"k_max must be non-negative, got {k_max}")
    if jet.order < k_max:
        raise InsufficientJetOrderError(f"Lambda derivatives through {k_max} need a jet of order {k_max}, got {jet.order}")
    if not coframe:
        return [ExactMatrix.zeros(0, jet.arity, scalar_domain(jet)) for _ in range(k_max + 1)]
    u = jet.series(k_max)
    rows = [[series_compose(c, u) for c in form.coefficients] for form in coframe]
    return _derivative_matrices(rows, k_max, scalar_domain(jet))


@dataclass(frozen=True)
class RegularityMatrix:
    """A together with its block layout"""

    p: int
    N: int
    q: int
    matrix: ExactMatrix

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    @property
    def domain(self) -> Any:
        return self.matrix.domain

    @property
    def is_symbolic(self) -> bool:
        return bool(getattr(self.domain, "is_PolynomialRing", False))

    def block(self, k: int, m: int) -> ExactMatrix:
        return self.matrix.block(k, m)


def block_layout(p: int, N: int, q: int) -> Dict[Tuple[int, int], Tuple[int, int, int, int]]:
    return {(k, m): (k * p, p, m * N, N) for k in range(q + 2) for m in range(q + 1)}


def assemble_blocks(
    R: Sequence[ExactMatrix], L: Sequence[ExactMatrix], p: int, N: int, q: int, domain: Any
) -> ExactMatrix:
    """A from the derivative lists by the binomial block rule"""
    rows = [[domain.zero] * (N * (q + 1)) for _ in range(p * (q + 2))]
    for k in range(q + 2):
        for m in range(q + 1):
            a, b = binomial(m, k), binomial(m, k - 1)
            if not a and not b:
                continue
            for s in range(p):
                target = rows[k * p + s]
                for mu in range(N):
                    value = domain.zero
                    if a:
                        value += R[m - k][s, mu] * a
                    if b:
                        value += L[m - k + 1][s, mu] * b
                    target[m * N + mu] = value
    return ExactMatrix(p * (q + 2), N * (q + 1), tuple(tuple(r) for r in rows), domain, block_layout(p, N, q))


def build_A(D: Distribution, jet: CurveJet, q: int) -> RegularityMatrix:
    """Regularity matrix A(j^{q+1}_u) of shape p(q+2) x N(q+1)"""
    if q < 0:
        raise PreconditionError(f"q must be non-negative, got {q}")
    if jet.arity != D.N:
        raise PreconditionError(f"jet in R^{jet.arity} for a distribution on R^{D.N}")
    if jet.order < q + 1:
        raise InsufficientJetOrderError(f"A at q = {q} needs a jet of order {q + 1}, got {jet.order}")
    domain = scalar_domain(jet)
    R = block_R_derivatives(D.coframe, jet, q)
    L = block_Lambda_derivatives(D.coframe, jet, q)
    A = assemble_blocks(R, L, D.p, D.N, q, domain)
    logger.debug(f"built A for q = {q}: {A.rows}x{A.cols} over {domain}")
    return RegularityMatrix(D.p, D.N, q, A)
