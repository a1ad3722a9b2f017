"""
Triangular solve for horizontal jets and symbolic tangency fibers.

Given D^1 with Lambda_x D^1 = 0, level r fixes D^{r+1} from the order-r
coefficient of the pullback jet:

    Lambda_x D^{r+1} = -r! * sum_{i=1..r} [t^i](lambda o u) D^{r-i+1} / (r-i)!

with the leftmost-pivot right inverse of Lambda_x, plus a free element of
D_x = ker Lambda_x written in the kernel basis of the distribution.
"""

import logging
from math import factorial
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

from sympy import QQ

from exactalg import (
    ArityMismatchError,
    ExactMatrix,
    IndexRangeError,
    NonTangentError,
    PreconditionError,
    TruncatedSeries,
    indeterminate_ring,
    right_inverse,
    solve_particular,
)
from geometry import AdaptedFrameData, Distribution

from .curve_jet import CurveJet, TauAssignment
from .pullback import composed_coefficients

logger = logging.getLogger(__name__)

Vector = Tuple[Any, ...]
FreeChoice = Union[Mapping[int, Sequence[Any]], Sequence[Sequence[Any]], None]


def _check_first_jet(D: Distribution, first_jet: Sequence[Any]) -> Vector:
    if len(first_jet) != D.N:
        raise ArityMismatchError(f"first jet has {len(first_jet)} components, expected {D.N}")
    first = tuple(QQ.convert(v) for v in first_jet)
    residual = D.coframe_matrix().apply(first)
    if any(residual):
        raise NonTangentError(f"first jet {first} is not in D_x: Lambda_x D^1 = {residual}")
    return first


def _free_levels(free: FreeChoice, alpha: int) -> Dict[int, Sequence[Any]]:
    if free is None:
        return {}
    if isinstance(free, Mapping):
        levels = dict(free)
    else:
        levels = {r: v for r, v in enumerate(free, start=1)}
    for r in levels:
        if not 1 <= r <= alpha:
            raise IndexRangeError(f"free choice given for level {r}, valid levels are 1..{alpha}")
    return levels


def _complete_jet(
    D: Distribution,
    first: Vector,
    alpha: int,
    kernel_part: Callable[[int], Optional[Vector]],
    ring: Any = None,
    t0: Any = 0,
) -> CurveJet:
    """Levels 1..alpha of the triangular solve; kernel_part(r) is added to D^{r+1}"""
    if alpha < 0:
        raise PreconditionError(f"alpha must be non-negative, got {alpha}")
    zero = QQ.zero if ring is None else ring.zero
    lift = (lambda v: QQ.convert(v)) if ring is None else ring
    inverse = right_inverse(D.coframe_matrix())
    N, p = D.N, D.p
    derivatives = [tuple(lift(v) for v in D.base_point), tuple(lift(v) for v in first)]
    for r in range(1, alpha + 1):
        u = tuple(
            TruncatedSeries(tuple(derivatives[k][mu] * QQ(1, factorial(k)) for k in range(r + 1)), zero)
            for mu in range(N)
        )
        composed = composed_coefficients(D.coframe, u)
        rhs = []
        for s in range(p):
            total = zero
            for mu in range(N):
                series = composed[s][mu]
                for i in range(1, r + 1):
                    c, d = series[i], derivatives[r - i + 1][mu]
                    if c and d:
                        total = total + c * d * QQ(1, factorial(r - i))
            rhs.append(-total * factorial(r))
        top = [zero] * N
        for mu in range(N):
            for s in range(p):
                if inverse[mu, s] and rhs[s]:
                    top[mu] = top[mu] + rhs[s] * inverse[mu, s]
        extra = kernel_part(r)
        if extra is not None:
            top = [a + b for a, b in zip(top, extra)]
        derivatives.append(tuple(top))
    logger.debug(f"tangency solve on {D.name or 'distribution'} through order {alpha}")
    return CurveJet(tuple(derivatives), t0, ring, alpha)


def tangency_solve(
    D: Distribution, first_jet: Sequence[Any], alpha: int, free: FreeChoice = None, t0: Any = 0
) -> CurveJet:
    """
    Horizontal (alpha+1)-jet through the base point with the given first derivative.

    ``free`` maps a level r in 1..alpha to coordinates in ``D.kernel_basis()``
    of the kernel component of D^{r+1}; missing levels get zero.
    """
    first = _check_first_jet(D, first_jet)
    kernel = D.kernel_basis()
    levels = _free_levels(free, alpha)

    def kernel_part(r: int) -> Optional[Vector]:
        if r not in levels:
            return None
        coords = [QQ.convert(c) for c in levels[r]]
        if len(coords) != len(kernel):
            raise ArityMismatchError(f"free choice at level {r} has {len(coords)} coordinates, expected {len(kernel)}")
        return tuple(sum((c * v[mu] for c, v in zip(coords, kernel)), QQ.zero) for mu in range(D.N))

    return _complete_jet(D, first, alpha, kernel_part, None, t0)


def kernel_coordinates(D: Distribution, vector: Sequence[Any]) -> Vector:
    """Coordinates of a vector of D_x in the kernel basis"""
    kernel = D.kernel_basis()
    if not kernel:
        if any(vector):
            raise NonTangentError(f"{tuple(vector)} is not in the zero distribution")
        return ()
    K = ExactMatrix.from_columns(kernel, D.N)
    coords = solve_particular(K, [QQ.convert(v) for v in vector])
    if coords is None:
        raise NonTangentError(f"{tuple(vector)} is not in D_x")
    return coords


def tau_vectors(
    D: Distribution, tau: TauAssignment, alpha: int, frame: Optional[AdaptedFrameData] = None
) -> Dict[int, Vector]:
    """Resolved tau^q for the nonzero levels 1 <= q <= alpha, checked to lie in D_x"""
    out = {}
    for q, label in tau.items():
        if not 1 <= q <= alpha:
            raise IndexRangeError(f"tau^{q} lies outside levels 1..{alpha}")
        vector = label.resolve(frame)
        if len(vector) != D.N:
            raise ArityMismatchError(f"tau^{q} has {len(vector)} components, expected {D.N}")
        if any(D.coframe_matrix().apply(vector)):
            raise NonTangentError(f"tau^{q} = {label} is not in D_x")
        out[q] = vector
    return out


def symbolic_fiber(
    D: Distribution,
    first_jet: Sequence[Any],
    alpha: int,
    tau: TauAssignment,
    frame: Optional[AdaptedFrameData] = None,
    t0: Any = 0,
) -> CurveJet:
    """
    Horizontal jet with D^{q+1} = X_q tau^q + (terms in X_1..X_{q-1}).

    Only levels with a nonzero tau^q get an indeterminate; without any the
    result is the rational jet of ``tangency_solve`` with zero free part.
    """
    first = _check_first_jet(D, first_jet)
    vectors = tau_vectors(D, tau, alpha, frame)
    if not vectors:
        return _complete_jet(D, first, alpha, lambda r: None, None, t0)
    ring = indeterminate_ring(tuple(sorted(vectors)))
    gens = dict(zip(sorted(vectors), ring.gens))

    def kernel_part(r: int) -> Optional[Vector]:
        if r not in vectors:
            return None
        return tuple(gens[r] * v for v in vectors[r])

    jet = _complete_jet(D, first, alpha, kernel_part, ring, t0)
    logger.info(f"symbolic fiber with {len(vectors)} indeterminates through order {alpha}")
    return jet


def fiber_point(
    D: Distribution,
    first_jet: Sequence[Any],
    alpha: int,
    tau: TauAssignment,
    values: Mapping[int, Any],
    frame: Optional[AdaptedFrameData] = None,
    t0: Any = 0,
) -> CurveJet:
    """Rational jet of the symbolic fiber at X_q = values[q] (missing values are 0)"""
    first = _check_first_jet(D, first_jet)
    vectors = tau_vectors(D, tau, alpha, frame)

    def kernel_part(r: int) -> Optional[Vector]:
        if r not in vectors or not values.get(r):
            return None
        x = QQ.convert(values[r])
        return tuple(x * v for v in vectors[r])

    return _complete_jet(D, first, alpha, kernel_part, None, t0)
