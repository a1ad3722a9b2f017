"""
Truncated power series with exact coefficients.

A TruncatedSeries of order d stores c_0..c_d of c_0 + c_1 t + ... + c_d t^d;
higher coefficients are unknown, so combining two series keeps the lower
order. Coefficients may be rationals or polynomials in jet indeterminates.
"""

import logging
from dataclasses import dataclass
from math import factorial
from typing import Any, Sequence, Tuple

from sympy import QQ
from sympy.polys.rings import PolyElement

from .errors import ArityMismatchError, PreconditionError
from .polynomials import horner_evaluate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TruncatedSeries:
    """Series c_0 + c_1 t + ... + c_d t^d (mod t^{d+1})"""

    coeffs: Tuple[Any, ...]
    zero: Any = QQ.zero

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise PreconditionError("a truncated series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def constant(cls, value: Any, order: int, zero: Any = QQ.zero) -> "TruncatedSeries":
        return cls((zero + value,) + (zero,) * order, zero)

    @classmethod
    def from_derivatives(cls, derivatives: Sequence[Any], zero: Any = QQ.zero) -> "TruncatedSeries":
        """Series whose k-th t-derivative at 0 is derivatives[k]"""
        return cls(
            tuple(zero + d * QQ(1, factorial(k)) for k, d in enumerate(derivatives)),
            zero,
        )

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Any:
        return self.coeffs[k]

    def derivative_at(self, k: int) -> Any:
        """k-th derivative at the expansion point, k! c_k"""
        return self.coeffs[k] * factorial(k)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise PreconditionError(f"cannot raise order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1], self.zero)

    def _lift(self, other: Any) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self.order, self.zero)

    def __add__(self, other: Any) -> "TruncatedSeries":
        other = self._lift(other)
        d = min(self.order, other.order)
        return TruncatedSeries(tuple(self.coeffs[k] + other.coeffs[k] for k in range(d + 1)), self.zero)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-c for c in self.coeffs), self.zero)

    def __sub__(self, other: Any) -> "TruncatedSeries":
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> "TruncatedSeries":
        return self._lift(other) - self

    def scale(self, factor: Any) -> "TruncatedSeries":
        return TruncatedSeries(tuple(c * factor for c in self.coeffs), self.zero)

    def __mul__(self, other: Any) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        d = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(d + 1):
            total = self.zero
            for i in range(k + 1):
                if a[i] and b[k - i]:
                    total = total + a[i] * b[k - i]
            out.append(total)
        return TruncatedSeries(tuple(out), self.zero)

    def __rmul__(self, other: Any) -> "TruncatedSeries":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "TruncatedSeries":
        if not isinstance(exponent, int) or exponent < 0:
            raise PreconditionError(f"series powers need a non-negative integer exponent, got {exponent}")
        result = TruncatedSeries.constant(1, self.order, self.zero)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def derivative(self) -> "TruncatedSeries":
        """d/dt; the order drops by one"""
        if self.order == 0:
            raise PreconditionError("cannot differentiate an order-0 series")
        return TruncatedSeries(tuple(self.coeffs[k] * k for k in range(1, self.order + 1)), self.zero)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(t)) for an inner series with zero constant term"""
        if inner.coeffs[0]:
            raise PreconditionError("inner series must have zero constant term")
        d = min(self.order, inner.order)
        result = TruncatedSeries.constant(self.coeffs[d], d, self.zero)
        inner = inner.truncate(d)
        for k in range(d - 1, -1, -1):
            result = result * inner + self.coeffs[k]
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(self.coeffs)!r})"


def series_compose(f: PolyElement, u: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """Taylor expansion of f(u(t)) to the common order of the u components"""
    if len(u) != f.ring.ngens:
        raise ArityMismatchError(f"{f.ring.ngens}-variable polynomial composed with {len(u)} series")
    if not u:
        raise ArityMismatchError("no series to compose with")
    orders = {s.order for s in u}
    if len(orders) != 1:
        raise PreconditionError(f"series components have different orders {sorted(orders)}")
    order = orders.pop()
    zero_series = TruncatedSeries.constant(u[0].zero, order, u[0].zero)
    value = horner_evaluate(f, list(u), zero_series)
    if not isinstance(value, TruncatedSeries):
        value = TruncatedSeries.constant(value, order, u[0].zero)
    return value
