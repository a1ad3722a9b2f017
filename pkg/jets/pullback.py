"""
Pullback jets of the defining coframe along a curve jet.

Entry (s, k) is d^k/dt^k of lambda^s(u(t))(du/dt) at t0, obtained from
truncated-series composition and one series product per form.
"""

import logging
from math import factorial
from typing import Any, List, Optional, Sequence, Tuple

from sympy import QQ

from exactalg import ArityMismatchError, InsufficientJetOrderError, TruncatedSeries, series_compose
from geometry import OneForm

from .curve_jet import CurveJet

logger = logging.getLogger(__name__)


def composed_coefficients(coframe: Sequence[OneForm], u: Sequence[TruncatedSeries]) -> List[List[TruncatedSeries]]:
    """lambda^s_mu(u(t)) as series, one row per form"""
    return [[series_compose(c, u) for c in form.coefficients] for form in coframe]


def velocity_series(jet: CurveJet, order: int) -> Tuple[TruncatedSeries, ...]:
    """du/dt about t0 to the given order; needs D^1..D^{order+1}"""
    zero = jet.zero
    return tuple(
        TruncatedSeries(tuple(jet[k + 1][mu] * QQ(1, factorial(k)) for k in range(order + 1)), zero)
        for mu in range(jet.arity)
    )


def pullback_series(coframe: Sequence[OneForm], jet: CurveJet) -> List[TruncatedSeries]:
    """u^* lambda^s (d/dt) as series of order alpha = jet.order - 1"""
    if jet.order < 1:
        raise InsufficientJetOrderError("the pullback jet needs at least the first derivative")
    for form in coframe:
        if form.arity != jet.arity:
            raise ArityMismatchError(f"{form.arity}-dimensional form pulled back by an {jet.arity}-dimensional jet")
    alpha = jet.order - 1
    u = jet.series(alpha)
    du = velocity_series(jet, alpha)
    out = []
    for row in composed_coefficients(coframe, u):
        total = TruncatedSeries.constant(jet.zero, alpha, jet.zero)
        for coeff, velocity in zip(row, du):
            if not coeff.is_zero() and not velocity.is_zero():
                total = total + coeff * velocity
        out.append(total)
    return out


def pullback_jet(coframe: Sequence[OneForm], jet: CurveJet) -> Tuple[Tuple[Any, ...], ...]:
    """p x (alpha+1) table of d^k/dt^k (lambda^s(u) du/dt) at t0"""
    table = tuple(
        tuple(series.derivative_at(k) for k in range(series.order + 1))
        for series in pullback_series(coframe, jet)
    )
    logger.debug(f"pullback jet of {len(coframe)} forms through order {jet.order - 1}")
    return table


def vanishing_order(coframe: Sequence[OneForm], jet: CurveJet) -> int:
    """Largest k with entries 0..k of every row zero; -1 if entry 0 already fails"""
    table = pullback_jet(coframe, jet)
    alpha = jet.order - 1
    for k in range(alpha + 1):
        if any(row[k] for row in table):
            return k - 1
    return alpha


def is_tangent(coframe: Sequence[OneForm], jet: CurveJet, alpha: Optional[int] = None) -> bool:
    """True when the pullback jet vanishes through order alpha (default: all available orders)"""
    alpha = jet.order - 1 if alpha is None else alpha
    if alpha > jet.order - 1:
        raise InsufficientJetOrderError(f"tangency through order {alpha} needs a jet of order {alpha + 1}")
    return vanishing_order(coframe, jet.truncate(alpha + 1)) >= alpha
