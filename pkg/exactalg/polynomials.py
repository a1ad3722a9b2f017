"""
Sparse multivariate polynomials over QQ.

Polynomials are sympy ``PolyElement`` objects living in cached ``PolyRing``
instances: the ambient ring QQ[y1..yN] for coframes and vector fields, rings
of indeterminates X_q for symbolic jet fibers, and QQ[t] / QQ(t) for curves
and operator coefficients.
"""

import logging
import re
from tokenize import TokenError
from collections import defaultdict
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import QQ, Symbol
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.fields import field
from sympy.polys.rings import PolyElement, PolyRing

from .errors import ArityMismatchError, ParseError, PreconditionError

logger = logging.getLogger(__name__)

MultiPoly = PolyElement

# Rational functions of the curve parameter and the polynomial ring under them.
TIME_FIELD, TIME = field("t", QQ)
TIME_RING = TIME_FIELD.ring

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))")
_RATIONAL = re.compile(r"^\s*(?P<num>[-+]?\d+)\s*(?:/\s*(?P<den>\d+)\s*)?$")


@lru_cache(maxsize=None)
def ambient_ring(n: int) -> PolyRing:
    """QQ[y1, ..., yn]"""
    if n < 1:
        raise PreconditionError(f"ambient dimension must be positive, got {n}")
    return PolyRing([f"y{i}" for i in range(1, n + 1)], QQ)


@lru_cache(maxsize=None)
def indeterminate_ring(indices: Tuple[int, ...]) -> PolyRing:
    """QQ[X_i for i in indices]; indices must be increasing"""
    if not indices:
        raise PreconditionError("an indeterminate ring needs at least one variable")
    if list(indices) != sorted(set(indices)):
        raise PreconditionError(f"indeterminate indices must be strictly increasing: {indices}")
    return PolyRing([f"X{i}" for i in indices], QQ)


def indeterminate_index(ring: PolyRing, position: int) -> int:
    """Index q of the generator X_q at the given position of an indeterminate ring"""
    return int(str(ring.symbols[position])[1:])


def parse_rational(text: Any, path: Optional[str] = None):
    """Parse an exact rational from "p", "-p" or "p/q" (ints are accepted as well)"""
    if isinstance(text, bool):
        raise ParseError(f"expected a rational string, got {text!r}", path=path)
    if isinstance(text, int):
        return QQ(text)
    if not isinstance(text, str):
        raise ParseError(f"expected a rational string, got {text!r}", path=path)
    match = _RATIONAL.match(text)
    if not match:
        raise ParseError(f"not a rational literal: {text!r}", column=1, path=path)
    den = int(match.group("den") or 1)
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}", column=text.index("/") + 2, path=path)
    return QQ(int(match.group("num")), den)


def parse_polynomial(text: str, ring: PolyRing, path: Optional[str] = None) -> PolyElement:
    """
    Parse a polynomial string over the generators of ``ring``.

    Only integer literals, the ring's variable names, ``+ - * / ^ **`` and
    parentheses are accepted; the result must be a polynomial (division only
    by rational constants, integer exponents).
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a polynomial string, got {text!r}", path=path)
    names = {str(s) for s in ring.symbols}
    position = 0
    stripped = text.rstrip()
    if not stripped.strip():
        raise ParseError("empty polynomial", column=1, path=path)
    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if not match or match.end() == position:
            raise ParseError(f"unexpected character {stripped[position]!r}", column=position + 1, path=path)
        name = match.group("name")
        if name is not None and name not in names:
            raise ParseError(f"unknown variable {name!r}", column=match.start("name") + 1, path=path)
        position = match.end()

    local = {name: Symbol(name) for name in names}
    try:
        expr = parse_expr(stripped.replace("^", "**"), local_dict=local)
    except (SyntaxError, TypeError, ValueError, TokenError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse {text!r}: {exc}", column=1, path=path) from exc
    try:
        return ring.from_expr(expr)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{text!r} is not a polynomial in {sorted(names)}", column=1, path=path) from exc


def horner_evaluate(f: PolyElement, values: Sequence[Any], zero: Any = None) -> Any:
    """
    Evaluate ``f`` at ``values`` by nested Horner schemes, one variable at a time.

    ``values`` may be rationals, polynomials of another ring or truncated
    series; ``zero`` is the additive identity of that scalar type (defaults to
    the rational zero).
    """
    if len(values) != f.ring.ngens:
        raise ArityMismatchError(
            f"polynomial in {f.ring.ngens} variables evaluated at {len(values)} values"
        )
    if zero is None:
        zero = QQ.zero
    terms = list(f.terms())
    if not terms:
        return zero
    return _horner(terms, values, 0, zero)


def _horner(terms: List[Tuple[Tuple[int, ...], Any]], values: Sequence[Any], index: int, zero: Any) -> Any:
    if index == len(values):
        total = zero
        for _, coeff in terms:
            total = total + coeff
        return total
    groups: Dict[int, List] = defaultdict(list)
    for monom, coeff in terms:
        groups[monom[index]].append((monom, coeff))
    value = values[index]
    result = None
    for exponent in range(max(groups), -1, -1):
        if result is not None:
            result = result * value
        if exponent in groups:
            inner = _horner(groups[exponent], values, index + 1, zero)
            result = inner if result is None else result + inner
    return result


def evaluate_at(f: PolyElement, point: Sequence[Any]):
    """Value of ``f`` at a rational point"""
    return horner_evaluate(f, [QQ.convert(v) for v in point], QQ.zero)


def partial(f: PolyElement, index: int) -> PolyElement:
    """d f / d y_{index+1}"""
    return f.diff(f.ring.gens[index])


def reduce_mod(value: Any, modulus: int) -> int:
    """Residue of a rational with denominator prime to ``modulus``"""
    value = QQ.convert(value)
    num, den = int(QQ.numer(value)), int(QQ.denom(value))
    if den % modulus == 0:
        raise PreconditionError(f"denominator {den} not invertible modulo {modulus}")
    return num * pow(den, -1, modulus) % modulus


def polynomial_to_string(f: PolyElement) -> str:
    """Stable textual form used in reports"""
    return str(f.as_expr()) if f else "0"


def max_total_degree(polys: Sequence[PolyElement]) -> int:
    degree = 0
    for f in polys:
        for monom in f.monoms():
            degree = max(degree, sum(monom))
    return degree
