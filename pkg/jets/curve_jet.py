"""
Curve jets, polynomial curves and tau assignments.

A CurveJet stores D^0 = u(t0), D^1, ..., D^{order}, the t-derivatives of a
curve at t0. Entries are rationals, or polynomials in indeterminates X_q
for symbolic fibers.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from math import factorial
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.rings import PolyElement, PolyRing

from exactalg import (
    TIME_RING,
    ArityMismatchError,
    PreconditionError,
    TruncatedSeries,
    horner_evaluate,
    indeterminate_index,
)

logger = logging.getLogger(__name__)

Vector = Tuple[Any, ...]


@dataclass(frozen=True)
class CurveJet:
    """(t0, D^0, ..., D^order) with an optional symbolic scalar ring"""

    derivatives: Tuple[Vector, ...]
    t0: Any = QQ.zero
    ring: Optional[PolyRing] = None
    tangent_order: Optional[int] = None

    def __post_init__(self):
        if not self.derivatives:
            raise PreconditionError("a jet needs at least the base point")
        arity = len(self.derivatives[0])
        if any(len(d) != arity for d in self.derivatives):
            raise ArityMismatchError("jet derivative vectors have different lengths")
        convert = self.scalar
        object.__setattr__(self, "derivatives", tuple(tuple(convert(x) for x in d) for d in self.derivatives))
        object.__setattr__(self, "t0", QQ.convert(self.t0))

    def scalar(self, value: Any) -> Any:
        if self.ring is None:
            return QQ.convert(value)
        if isinstance(value, PolyElement) and value.ring == self.ring:
            return value
        return self.ring(value)

    @property
    def zero(self) -> Any:
        return QQ.zero if self.ring is None else self.ring.zero

    @property
    def order(self) -> int:
        return len(self.derivatives) - 1

    @property
    def arity(self) -> int:
        return len(self.derivatives[0])

    @property
    def is_symbolic(self) -> bool:
        return self.ring is not None

    def __getitem__(self, k: int) -> Vector:
        return self.derivatives[k]

    def series(self, order: Optional[int] = None) -> Tuple[TruncatedSeries, ...]:
        """Taylor series of each component about t0, truncated at ``order``"""
        order = self.order if order is None else order
        if order > self.order:
            raise PreconditionError(f"jet of order {self.order} cannot give a series of order {order}")
        zero = self.zero
        return tuple(
            TruncatedSeries(tuple(self.derivatives[k][mu] * QQ(1, factorial(k)) for k in range(order + 1)), zero)
            for mu in range(self.arity)
        )

    def truncate(self, order: int) -> "CurveJet":
        if order > self.order:
            raise PreconditionError(f"cannot truncate a jet of order {self.order} to {order}")
        tangent = None if self.tangent_order is None else min(self.tangent_order, order - 1)
        return CurveJet(self.derivatives[: order + 1], self.t0, self.ring, tangent)

    def specialize(self, values: Any) -> "CurveJet":
        """Rational jet obtained by substituting values for the X indeterminates"""
        if self.ring is None:
            return self
        point = self._point(values)
        return CurveJet(
            tuple(tuple(QQ.convert(horner_evaluate(x, point)) for x in d) for d in self.derivatives),
            self.t0, None, self.tangent_order,
        )

    def _point(self, values: Any) -> Sequence[Any]:
        if isinstance(values, Mapping):
            return [QQ.convert(values.get(indeterminate_index(self.ring, i), 0)) for i in range(self.ring.ngens)]
        values = list(values)
        if len(values) != self.ring.ngens:
            raise ArityMismatchError(f"{len(values)} values for {self.ring.ngens} indeterminates")
        return [QQ.convert(v) for v in values]

    def indeterminates(self) -> Tuple[int, ...]:
        """Indices q of the X_q carried by the scalar ring"""
        if self.ring is None:
            return ()
        return tuple(indeterminate_index(self.ring, i) for i in range(self.ring.ngens))

    def variables_in(self, k: int) -> Tuple[int, ...]:
        """Indices of the X_q actually occurring in D^k"""
        if self.ring is None:
            return ()
        present = set()
        for x in self.derivatives[k]:
            for monom in x.monoms():
                present.update(i for i, e in enumerate(monom) if e)
        return tuple(sorted(indeterminate_index(self.ring, i) for i in present))

    def to_strings(self) -> Sequence[Sequence[str]]:
        return [[str(x.as_expr()) if self.ring is not None else str(x) for x in d] for d in self.derivatives]


@dataclass(frozen=True)
class PolyCurve:
    """u(t) with components in QQ[t]"""

    components: Tuple[PolyElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(TIME_RING(c) for c in self.components))

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[Sequence[Any]]) -> "PolyCurve":
        """Components given by ascending coefficient lists in t"""
        t = TIME_RING.gens[0]
        comps = []
        for coeffs in coefficients:
            value = TIME_RING.zero
            for k, c in enumerate(coeffs):
                value += t**k * QQ.convert(c)
            comps.append(value)
        return cls(tuple(comps))

    @property
    def arity(self) -> int:
        return len(self.components)

    def derivative(self) -> "PolyCurve":
        t = TIME_RING.gens[0]
        return PolyCurve(tuple(c.diff(t) for c in self.components))

    def at(self, t0: Any) -> Vector:
        return tuple(QQ.convert(horner_evaluate(c, [QQ.convert(t0)])) for c in self.components)

    def jet(self, t0: Any, order: int) -> CurveJet:
        """Derivatives 0..order at t0"""
        derivs = []
        curve = self
        for _ in range(order + 1):
            derivs.append(curve.at(t0))
            curve = curve.derivative()
        return CurveJet(tuple(derivs), t0)

    def symbolic_jet(self, order: int) -> CurveJet:
        """Derivatives 0..order as polynomials in t, i.e. the jet at a general parameter"""
        derivs = []
        curve = self
        for _ in range(order + 1):
            derivs.append(curve.components)
            curve = curve.derivative()
        return CurveJet(tuple(derivs), 0, TIME_RING)

    def perturbed(self, term: Sequence[Any], power: int, t0: Any = 0) -> "PolyCurve":
        """u + term * (t - t0)^power"""
        t = TIME_RING.gens[0]
        shift = (t - QQ.convert(t0)) ** power
        return PolyCurve(tuple(c + shift * QQ.convert(v) for c, v in zip(self.components, term)))


class TauKind(Enum):
    ZERO = "zero"
    FRAME = "frame"
    VECTOR = "vector"


@dataclass(frozen=True)
class TauLabel:
    """Zero, an adapted-frame vector tau^{s,j}, or an explicit vector of D_x"""

    kind: TauKind = TauKind.ZERO
    s: int = 0
    j: int = 0
    vector: Optional[Vector] = None

    @classmethod
    def zero(cls) -> "TauLabel":
        return cls()

    @classmethod
    def tau(cls, s: int, j: int) -> "TauLabel":
        return cls(TauKind.FRAME, s, j)

    @classmethod
    def explicit(cls, vector: Sequence[Any]) -> "TauLabel":
        return cls(TauKind.VECTOR, vector=tuple(QQ.convert(v) for v in vector))

    @property
    def is_zero(self) -> bool:
        return self.kind is TauKind.ZERO

    def resolve(self, frame: Any = None) -> Optional[Vector]:
        if self.kind is TauKind.ZERO:
            return None
        if self.kind is TauKind.VECTOR:
            return self.vector
        if frame is None:
            raise PreconditionError(f"{self} needs an adapted frame to resolve")
        try:
            return frame.tau[(self.s, self.j)]
        except KeyError:
            raise PreconditionError(f"{self} is not a label of the adapted frame") from None

    def __str__(self) -> str:
        if self.kind is TauKind.ZERO:
            return "0"
        if self.kind is TauKind.FRAME:
            return f"tau^{{{self.s},{self.j}}}"
        return "(" + ", ".join(str(v) for v in self.vector) + ")"


@dataclass
class TauAssignment:
    """q -> tau label; unassigned levels are Zero"""

    labels: Dict[int, TauLabel] = field(default_factory=dict)

    def __getitem__(self, q: int) -> TauLabel:
        return self.labels.get(q, TauLabel.zero())

    def __setitem__(self, q: int, label: TauLabel) -> None:
        if q < 0:
            raise PreconditionError(f"tau index must be non-negative, got {q}")
        if label.is_zero:
            self.labels.pop(q, None)
        else:
            self.labels[q] = label

    def nonzero_levels(self) -> Tuple[int, ...]:
        return tuple(sorted(self.labels))

    def copy(self) -> "TauAssignment":
        return TauAssignment(dict(self.labels))

    def merged(self, other: "TauAssignment") -> "TauAssignment":
        out = self.copy()
        for q, label in other.labels.items():
            if q in out.labels and out.labels[q] != label:
                raise PreconditionError(f"conflicting tau labels at level {q}: {out.labels[q]} vs {label}")
            out.labels[q] = label
        return out

    def items(self) -> Iterable[Tuple[int, TauLabel]]:
        return sorted(self.labels.items())
