"""
Polynomial vector fields and 1-forms on QQ^N.

Coefficients live in the ambient ring QQ[y1..yN]. Brackets and exterior
derivatives are computed exactly on the coefficient polynomials.
"""

import logging
from dataclasses import dataclass
from typing import Any, Sequence, Tuple

from sympy import QQ
from sympy.polys.rings import PolyElement, PolyRing

from exactalg import ArityMismatchError, ExactMatrix, evaluate_at, partial

logger = logging.getLogger(__name__)


def _check_ring(ring: PolyRing, polys: Sequence[PolyElement]) -> Tuple[PolyElement, ...]:
    out = []
    for f in polys:
        if isinstance(f, PolyElement) and f.ring == ring:
            out.append(f)
        else:
            out.append(ring(f))
    return tuple(out)


@dataclass(frozen=True)
class VectorField:
    """X = X^mu d/dy^mu"""

    ring: PolyRing
    components: Tuple[PolyElement, ...]

    def __post_init__(self):
        if len(self.components) != self.ring.ngens:
            raise ArityMismatchError(f"{len(self.components)} components for a {self.ring.ngens}-dimensional space")
        object.__setattr__(self, "components", _check_ring(self.ring, self.components))

    @classmethod
    def constant(cls, ring: PolyRing, vector: Sequence[Any]) -> "VectorField":
        return cls(ring, tuple(ring.ground_new(QQ.convert(v)) for v in vector))

    @classmethod
    def coordinate(cls, ring: PolyRing, index: int) -> "VectorField":
        return cls.constant(ring, [1 if i == index else 0 for i in range(ring.ngens)])

    @property
    def arity(self) -> int:
        return self.ring.ngens

    def __call__(self, f: PolyElement) -> PolyElement:
        """Directional derivative X(f)"""
        total = self.ring.zero
        for mu, coeff in enumerate(self.components):
            if coeff:
                total += coeff * partial(f, mu)
        return total

    def __add__(self, other: "VectorField") -> "VectorField":
        _same_arity(self, other)
        return VectorField(self.ring, tuple(a + b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "VectorField":
        return VectorField(self.ring, tuple(-a for a in self.components))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def scale(self, factor: Any) -> "VectorField":
        return VectorField(self.ring, tuple(a * factor for a in self.components))

    def value_at(self, point: Sequence[Any]) -> Tuple[Any, ...]:
        return tuple(evaluate_at(c, point) for c in self.components)

    def is_zero(self) -> bool:
        return not any(self.components)

    def __str__(self) -> str:
        terms = [f"({c.as_expr()})*d{s}" for c, s in zip(self.components, self.ring.symbols) if c]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class OneForm:
    """lambda = lambda_mu dy^mu"""

    ring: PolyRing
    coefficients: Tuple[PolyElement, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.ring.ngens:
            raise ArityMismatchError(f"{len(self.coefficients)} coefficients for a {self.ring.ngens}-dimensional space")
        object.__setattr__(self, "coefficients", _check_ring(self.ring, self.coefficients))

    @property
    def arity(self) -> int:
        return self.ring.ngens

    def __call__(self, field: VectorField) -> PolyElement:
        """Pairing lambda(X)"""
        _same_arity(self, field)
        total = self.ring.zero
        for a, b in zip(self.coefficients, field.components):
            if a and b:
                total += a * b
        return total

    def pair_vector(self, point: Sequence[Any], vector: Sequence[Any]):
        """lambda_x(v) for a constant vector v at the point x"""
        total = QQ.zero
        for a, v in zip(self.coefficients, vector):
            if a and v:
                total += evaluate_at(a, point) * QQ.convert(v)
        return total

    def value_at(self, point: Sequence[Any]) -> Tuple[Any, ...]:
        return tuple(evaluate_at(c, point) for c in self.coefficients)

    def curvature(self, mu: int, nu: int) -> PolyElement:
        """Component (d lambda)(d_nu, d_mu) = d_nu lambda_mu - d_mu lambda_nu"""
        return partial(self.coefficients[mu], nu) - partial(self.coefficients[nu], mu)

    def exterior_derivative_at(self, point: Sequence[Any]) -> ExactMatrix:
        """Antisymmetric F with (d lambda)_x(v, w) = sum_{a,b} F[a][b] v^a w^b"""
        n = self.arity
        rows = [[evaluate_at(self.curvature(b, a), point) for b in range(n)] for a in range(n)]
        return ExactMatrix.from_rows(rows, QQ, cols=n)

    def d_at(self, point: Sequence[Any], v: Sequence[Any], w: Sequence[Any]):
        """(d lambda)_x(v, w) for constant vectors"""
        total = QQ.zero
        n = self.arity
        for a in range(n):
            if not v[a]:
                continue
            for b in range(n):
                if w[b]:
                    c = self.curvature(b, a)
                    if c:
                        total += evaluate_at(c, point) * QQ.convert(v[a]) * QQ.convert(w[b])
        return total

    def is_closed(self) -> bool:
        n = self.arity
        return all(not self.curvature(a, b) for a in range(n) for b in range(a + 1, n))

    def __str__(self) -> str:
        terms = [f"({c.as_expr()})*d{s}" for c, s in zip(self.coefficients, self.ring.symbols) if c]
        return " + ".join(terms) if terms else "0"


def _same_arity(a: Any, b: Any) -> None:
    if a.arity != b.arity:
        raise ArityMismatchError(f"arity mismatch: {a.arity} vs {b.arity}")


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^mu = X(Y^mu) - Y(X^mu)"""
    _same_arity(X, Y)
    return VectorField(X.ring, tuple(X(Y.components[mu]) - Y(X.components[mu]) for mu in range(X.arity)))


def d_oneform_eval(form: OneForm, X: VectorField, Y: VectorField) -> PolyElement:
    """(d lambda)(X, Y) = X(lambda(Y)) - Y(lambda(X)) - lambda([X, Y])"""
    _same_arity(form, X)
    _same_arity(X, Y)
    return X(form(Y)) - Y(form(X)) - form(lie_bracket(X, Y))


def linear_combination(forms: Sequence[OneForm], weights: Sequence[Any]) -> OneForm:
    """Constant-coefficient combination sum_k weights[k] * forms[k]"""
    if len(forms) != len(weights):
        raise ArityMismatchError(f"{len(weights)} weights for {len(forms)} forms")
    if not forms:
        raise ArityMismatchError("empty combination")
    ring = forms[0].ring
    coeffs = [ring.zero] * ring.ngens
    for form, w in zip(forms, weights):
        w = QQ.convert(w)
        if not w:
            continue
        for mu, c in enumerate(form.coefficients):
            if c:
                coeffs[mu] += c * w
    return OneForm(ring, tuple(coeffs))
