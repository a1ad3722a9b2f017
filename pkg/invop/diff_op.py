"""
Linear ordinary differential operators S = S^0 + S^1 d_t + ... + S^q d_t^q.

Coefficients are matrices over QQ(t). Composition follows the Leibniz rule
and the formal adjoint is f -> sum_i (-1)^i d_t^i((S^i)^T f).
"""

import logging
from dataclasses import dataclass
from math import comb, factorial
from typing import Any, List, Sequence, Tuple

import numpy as np
from sympy import QQ

from exactalg import TIME, TIME_FIELD, ArityMismatchError, ExactMatrix, PreconditionError, horner_evaluate

logger = logging.getLogger(__name__)

FRAC = TIME_FIELD.to_domain()


def to_fraction(value: Any) -> Any:
    """Element of QQ(t) from a rational, a QQ[t] polynomial or a fraction"""
    return FRAC.convert(value)


def differentiate(f: Any) -> Any:
    return f.diff(TIME)


def evaluate_fraction(f: Any, t0: Any) -> Any:
    """f(t0) for f in QQ(t); the denominator must not vanish at t0"""
    t0 = QQ.convert(t0)
    den = horner_evaluate(f.denom, [t0])
    if not den:
        raise PreconditionError(f"denominator of {f.as_expr()} vanishes at t = {t0}")
    return QQ.convert(horner_evaluate(f.numer, [t0])) / QQ.convert(den)


def _float_poly(poly: Any) -> np.ndarray:
    coeffs = np.zeros(poly.degree() + 1 if poly else 1)
    for (k,), c in poly.terms():
        coeffs[k] = float(c)
    return coeffs


def evaluate_fraction_float(f: Any, grid: np.ndarray) -> np.ndarray:
    """Double-precision values of f on a grid of t values"""
    num = np.polynomial.polynomial.polyval(grid, _float_poly(f.numer))
    den = np.polynomial.polynomial.polyval(grid, _float_poly(f.denom))
    return num / den


def derivative_matrix(M: ExactMatrix) -> ExactMatrix:
    return M.map_entries(differentiate, FRAC)


@dataclass(frozen=True)
class DiffOp:
    """Operator from R^source-valued to R^target-valued functions of t"""

    coefficients: Tuple[ExactMatrix, ...]
    source: int
    target: int

    def __post_init__(self):
        if not self.coefficients:
            raise PreconditionError("an operator needs at least its order-0 coefficient")
        converted = []
        for i, M in enumerate(self.coefficients):
            if M.shape != (self.target, self.source):
                raise ArityMismatchError(
                    f"coefficient {i} has shape {M.shape}, expected {(self.target, self.source)}"
                )
            converted.append(M if M.domain == FRAC else M.convert_to(FRAC))
        object.__setattr__(self, "coefficients", tuple(converted))

    @classmethod
    def from_matrices(cls, matrices: Sequence[Sequence[Sequence[Any]]], source: int, target: int) -> "DiffOp":
        return cls(
            tuple(ExactMatrix.from_rows([[to_fraction(x) for x in row] for row in M], FRAC, cols=source) for M in matrices),
            source, target,
        )

    @classmethod
    def zero(cls, target: int, source: int, order: int = 0) -> "DiffOp":
        return cls(tuple(ExactMatrix.zeros(target, source, FRAC) for _ in range(order + 1)), source, target)

    @classmethod
    def identity(cls, n: int) -> "DiffOp":
        return cls((ExactMatrix.identity(n, FRAC),), n, n)

    @classmethod
    def multiplication(cls, M: ExactMatrix) -> "DiffOp":
        return cls((M.convert_to(FRAC),), M.cols, M.rows)

    @classmethod
    def d_dt(cls, n: int) -> "DiffOp":
        return cls((ExactMatrix.zeros(n, n, FRAC), ExactMatrix.identity(n, FRAC)), n, n)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, i: int) -> ExactMatrix:
        if i < len(self.coefficients):
            return self.coefficients[i]
        return ExactMatrix.zeros(self.target, self.source, FRAC)

    def trimmed(self) -> "DiffOp":
        """Same operator without vanishing top coefficients"""
        coeffs = list(self.coefficients)
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        return DiffOp(tuple(coeffs), self.source, self.target)

    def __add__(self, other: "DiffOp") -> "DiffOp":
        if (self.source, self.target) != (other.source, other.target):
            raise ArityMismatchError(f"cannot add operators {self.target}x{self.source} and {other.target}x{other.source}")
        order = max(self.order, other.order)
        return DiffOp(tuple(self.coefficient(i) + other.coefficient(i) for i in range(order + 1)), self.source, self.target)

    def __neg__(self) -> "DiffOp":
        return DiffOp(tuple(M.scale(-1) for M in self.coefficients), self.source, self.target)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(M.is_zero() for M in self.coefficients)

    def at(self, t0: Any) -> List[ExactMatrix]:
        """Coefficient matrices evaluated at t0"""
        return [M.map_entries(lambda f: evaluate_fraction(f, t0), QQ) for M in self.coefficients]

    def apply(self, f: Sequence[Any]) -> Tuple[Any, ...]:
        return apply(self, f)

    def __str__(self) -> str:
        parts = []
        for i, M in enumerate(self.coefficients):
            if not M.is_zero():
                parts.append(f"S^{i} = {M.tolist()}")
        return "; ".join(parts) if parts else "0"


def op_compose(S: DiffOp, R: DiffOp) -> DiffOp:
    """S o R; S^m d^m o R^j d^j adds C(m, k) S^m d^{m-k}(R^j) to level k + j"""
    if S.source != R.target:
        raise ArityMismatchError(f"cannot compose an operator on R^{S.source} after one into R^{R.target}")
    levels = [ExactMatrix.zeros(S.target, R.source, FRAC) for _ in range(S.order + R.order + 1)]
    for j, Rj in enumerate(R.coefficients):
        if Rj.is_zero():
            continue
        derivs = [Rj]
        for _ in range(S.order):
            derivs.append(derivative_matrix(derivs[-1]))
        for m, Sm in enumerate(S.coefficients):
            if Sm.is_zero():
                continue
            for k in range(m + 1):
                term = derivs[m - k]
                if term.is_zero():
                    continue
                product = Sm @ term
                levels[k + j] = levels[k + j] + (product.scale(comb(m, k)) if comb(m, k) != 1 else product)
    return DiffOp(tuple(levels), R.source, S.target)


def op_adjoint(S: DiffOp) -> DiffOp:
    """Formal adjoint; level l is sum_{i >= l} (-1)^i C(i, l) d^{i-l}((S^i)^T)"""
    levels = [ExactMatrix.zeros(S.source, S.target, FRAC) for _ in range(S.order + 1)]
    for i, Si in enumerate(S.coefficients):
        if Si.is_zero():
            continue
        derivs = [Si.transpose()]
        for _ in range(i):
            derivs.append(derivative_matrix(derivs[-1]))
        sign = -1 if i % 2 else 1
        for level in range(i + 1):
            factor = sign * comb(i, level)
            levels[level] = levels[level] + derivs[i - level].scale(factor)
    return DiffOp(tuple(levels), S.target, S.source)


def apply(S: DiffOp, f: Sequence[Any]) -> Tuple[Any, ...]:
    """(S f)(t) for a vector of elements of QQ(t)"""
    if len(f) != S.source:
        raise ArityMismatchError(f"operator on R^{S.source} applied to a {len(f)}-vector")
    current = [to_fraction(x) for x in f]
    out = [FRAC.zero] * S.target
    for i, Si in enumerate(S.coefficients):
        if i:
            current = [differentiate(x) for x in current]
        if Si.is_zero() or not any(current):
            continue
        for r, value in enumerate(Si.apply(current)):
            out[r] = out[r] + value
    return tuple(out)


def monomial_inputs(dim: int, degree: int) -> List[Tuple[int, int, Tuple[Any, ...]]]:
    """(component, power, e_component t^power) for every power up to degree"""
    out = []
    for i in range(dim):
        for k in range(degree + 1):
            f = [FRAC.zero] * dim
            f[i] = TIME**k
            out.append((i, k, tuple(f)))
    return out


def numeric_residual(S: DiffOp, expected: DiffOp, grid: Sequence[float], degree: int) -> float:
    """
    Largest |(S - expected) f| in double precision over monomial inputs and a t grid.

    A cross-check only; exact residuals decide every verdict.
    """
    diff = S - expected
    grid = np.asarray(grid, dtype=float)
    values = [
        np.array([[evaluate_fraction_float(x, grid) for x in row] for row in M.entries]).reshape(M.rows, M.cols, len(grid))
        for M in diff.coefficients
    ]
    worst = 0.0
    for i in range(diff.source):
        for k in range(degree + 1):
            total = np.zeros((diff.target, len(grid)))
            for level, V in enumerate(values):
                if level > k:
                    break
                dk = factorial(k) / factorial(k - level) * grid ** (k - level)
                total += V[:, i, :] * dk
            worst = max(worst, float(np.max(np.abs(total))) if total.size else 0.0)
    return worst
