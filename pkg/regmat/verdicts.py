"""
W-regularity and membership in W_alpha.

A (q+1)-jet is W-regular when D^1 != 0 and A has full row rank p(q+2).
Rational jets get an exact rank (large ones are first tried modulo a prime,
where full row rank already settles it); symbolic jets a randomized lower
bound, confirmed symbolically when the matrix is small.
"""

import logging
import random
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

from exactalg import (
    InsufficientJetOrderError,
    PreconditionError,
    RankEstimate,
    exact_rank,
    modular_rank,
    probabilistic_rank,
)
from geometry import Distribution
from jets import CurveJet, vanishing_order

from .regularity_matrix import build_A

logger = logging.getLogger(__name__)

REASONS = ("injectivity", "rank", "tangency")

# rational matrices above this many entries try a full-rank certificate mod 2^31 - 1 first
MODULAR_RANK_SIZE = 2000


@dataclass(frozen=True)
class RegularityVerdict:
    regular: bool
    q: int
    rank: int
    expected_rank: int
    shape: Tuple[int, int]
    reason: Optional[str] = None
    exact: bool = True
    failure_bound: float = 0.0
    alpha: Optional[int] = None

    def __bool__(self) -> bool:
        return self.regular

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["shape"] = list(self.shape)
        return data


def min_q(n: int, p: int) -> int:
    """Smallest q >= 0 with n q >= p - n"""
    if n < 1 or p < 0:
        raise PreconditionError(f"need n >= 1 and p >= 0, got n = {n}, p = {p}")
    return max(0, -(-(p - n) // n))


def underdetermined(n: int, p: int, q: int) -> bool:
    """p^2 (q+2) < p N (q+1), i.e. n q > p - n"""
    return n * q > p - n


def jet_order_threshold(q: int) -> int:
    """Smallest alpha for which W_alpha is defined at level q"""
    return 2 * q


def microflexibility_threshold(q: int) -> int:
    """Jet order above which the relation is microflexible"""
    return 3 * q + 1


def is_injective(jet: CurveJet) -> bool:
    return jet.order >= 1 and any(jet[1])


def _rank(matrix, trials: int, bound: int, rng: Optional[random.Random]) -> RankEstimate:
    if getattr(matrix.domain, "is_PolynomialRing", False):
        return probabilistic_rank(matrix, trials, bound, rng)
    if matrix.rows * matrix.cols > MODULAR_RANK_SIZE:
        try:
            if modular_rank(matrix) == matrix.rows:
                return RankEstimate(matrix.rows, 0, bound, 0.0, True)
        except PreconditionError:
            logger.debug("denominator divisible by the modulus; exact rank instead")
    return RankEstimate(exact_rank(matrix), 0, bound, 0.0, True)


def is_W_regular(
    D: Distribution,
    jet: CurveJet,
    q: int,
    trials: int = 5,
    bound: int = 2**64,
    rng: Optional[random.Random] = None,
) -> RegularityVerdict:
    """du injective and rank A(j^{q+1}_u) = p(q+2)"""
    if D.n * q < D.p - D.n:
        raise PreconditionError(f"q = {q} is below the threshold {min_q(D.n, D.p)} for n = {D.n}, p = {D.p}")
    if jet.order < q + 1:
        raise InsufficientJetOrderError(f"W-regularity at q = {q} needs a jet of order {q + 1}, got {jet.order}")
    expected = D.p * (q + 2)
    shape = (expected, D.N * (q + 1))
    if not is_injective(jet):
        return RegularityVerdict(False, q, 0, expected, shape, "injectivity")
    A = build_A(D, jet.truncate(q + 1), q)
    estimate = _rank(A.matrix, trials, bound, rng)
    regular = estimate.rank == expected
    logger.debug(f"rank A = {estimate.rank} of {expected} at q = {q}")
    return RegularityVerdict(
        regular, q, estimate.rank, expected, shape,
        None if regular else "rank", estimate.exact, estimate.failure_bound,
    )


def is_in_W_alpha(
    D: Distribution,
    jet: CurveJet,
    alpha: int,
    q: int,
    trials: int = 5,
    bound: int = 2**64,
    rng: Optional[random.Random] = None,
) -> RegularityVerdict:
    """Tangent through order alpha and W-regular on the (q+1)-truncation"""
    if alpha < jet_order_threshold(q):
        raise PreconditionError(f"alpha = {alpha} is below 2q = {jet_order_threshold(q)}")
    if jet.order < alpha + 1:
        raise InsufficientJetOrderError(f"W_{alpha} membership needs a jet of order {alpha + 1}, got {jet.order}")
    jet = jet.truncate(alpha + 1)
    if vanishing_order(D.coframe, jet) < alpha:
        return RegularityVerdict(False, q, 0, D.p * (q + 2), (D.p * (q + 2), D.N * (q + 1)), "tangency", alpha=alpha)
    verdict = is_W_regular(D, jet, q, trials, bound, rng)
    return RegularityVerdict(
        verdict.regular, q, verdict.rank, verdict.expected_rank, verdict.shape,
        verdict.reason, verdict.exact, verdict.failure_bound, alpha,
    )


def is_dlambda_regular(D: Distribution, jet: CurveJet) -> bool:
    """rank [R_u; Lambda] = 2p with du injective"""
    if not is_injective(jet):
        return False
    return exact_rank(build_A(D, jet.truncate(1), 0).matrix) == 2 * D.p
