"""
Distributions given by a polynomial coframe, their growth vectors and flags.

The flag D^1 = D, D^{i+1} = D^i + [D, D^i] is evaluated at the base point
by bracketing spanning fields and extending a basis of the pointwise spans.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyRing

from exactalg import (
    ExactMatrix,
    ParseError,
    PreconditionError,
    RankDeficientError,
    exact_rank,
    pivot_columns,
)

from .fields import OneForm, VectorField, lie_bracket, linear_combination

logger = logging.getLogger(__name__)

# Upper bound on new bracket fields kept per flag level.
MAX_FIELDS_PER_LEVEL = 256


@dataclass(frozen=True)
class GrowthVector:
    """Type (m_0, m_1, ..., m_{r+1}) of a distribution at a point"""

    m: Tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        object.__setattr__(self, "m", m)
        if len(m) < 2:
            raise PreconditionError(f"growth vector needs at least m_0 and m_1, got {m}")
        if m[0] != 0:
            raise PreconditionError(f"growth vector must start at 0, got {m}")
        if any(b < a for a, b in zip(m, m[1:])):
            raise PreconditionError(f"growth vector must be weakly increasing, got {m}")
        if m[1] < 1:
            raise PreconditionError(f"rank m_1 must be positive, got {m}")

    @classmethod
    def parse(cls, text: str) -> "GrowthVector":
        """Parse "0,10,12,14" """
        parts = [p.strip() for p in str(text).split(",")]
        try:
            values = tuple(int(p) for p in parts)
        except ValueError as exc:
            raise ParseError(f"malformed growth vector {text!r}") from exc
        try:
            return cls(values)
        except PreconditionError as exc:
            raise ParseError(f"malformed growth vector {text!r}: {exc}") from exc

    @property
    def step(self) -> int:
        """r"""
        return len(self.m) - 2

    @property
    def rank(self) -> int:
        """n = m_1"""
        return self.m[1]

    @property
    def dimension(self) -> int:
        """N = m_{r+1}"""
        return self.m[-1]

    @property
    def corank(self) -> int:
        return self.m[-1] - self.m[1]

    def jump(self, s: int) -> int:
        """p_s = m_{s+1} - m_s for 1 <= s <= r, with p_0 = 0"""
        if s == 0:
            return 0
        if s < 0 or s > self.step:
            raise PreconditionError(f"jump index {s} outside 0..{self.step}")
        return self.m[s + 1] - self.m[s]

    @property
    def jumps(self) -> Tuple[int, ...]:
        return tuple(self.jump(s) for s in range(1, self.step + 1))

    def compressed(self) -> "GrowthVector":
        """Drop zero jumps so every level contributes"""
        out = [0, self.m[1]]
        for value in self.m[2:]:
            if value != out[-1]:
                out.append(value)
        return GrowthVector(tuple(out))

    def level_offset(self, s: int) -> int:
        """p_1 + ... + p_{s-1}"""
        return sum(self.jump(k) for k in range(1, s))

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.m) + ")"


@dataclass(frozen=True)
class FieldRecord:
    """A flag generator with its bracket certificate [spanning[left], right]"""

    field: VectorField
    level: int
    left: Optional[int] = None
    right: Optional["FieldRecord"] = None


@dataclass(frozen=True)
class FlagData:
    """Pointwise flag of a distribution"""

    growth: GrowthVector
    spanning: Tuple[VectorField, ...]
    levels: Tuple[Tuple[FieldRecord, ...], ...]
    basis: Tuple[Tuple[Any, ...], ...]
    level_dims: Tuple[int, ...]
    bracket_generating: bool
    max_step: int
    capped_levels: Tuple[int, ...] = ()

    def basis_upto(self, level: int) -> Tuple[Tuple[Any, ...], ...]:
        """Basis of D^level at the base point (level >= 1)"""
        return self.basis[: self.growth.m[min(level, len(self.growth.m) - 1)]]


@dataclass(frozen=True)
class Distribution:
    """Corank-p distribution ker(lambda^1, ..., lambda^p) on QQ^N with a base point"""

    ring: PolyRing
    coframe: Tuple[OneForm, ...]
    base_point: Tuple[Any, ...]
    generators: Optional[Tuple[VectorField, ...]] = None
    name: str = ""
    _cache: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        N = self.ring.ngens
        object.__setattr__(self, "base_point", tuple(QQ.convert(v) for v in self.base_point))
        object.__setattr__(self, "coframe", tuple(self.coframe))
        if len(self.base_point) != N:
            raise PreconditionError(f"base point has {len(self.base_point)} coordinates, expected {N}")
        for form in self.coframe:
            if form.ring != self.ring:
                raise PreconditionError("coframe forms must live in the ambient ring")
        if exact_rank(self.coframe_matrix()) != self.p:
            raise RankDeficientError(f"coframe of {self.name or 'distribution'} is rank-deficient at the base point")
        if self.generators is not None:
            object.__setattr__(self, "generators", tuple(self.generators))
            if len(self.generators) != self.n:
                raise PreconditionError(f"{len(self.generators)} generators given for a rank-{self.n} distribution")
            for X in self.generators:
                for form in self.coframe:
                    if form(X):
                        raise PreconditionError(f"generator {X} does not annihilate {form}")
            values = ExactMatrix.from_columns([X.value_at(self.base_point) for X in self.generators], N)
            if exact_rank(values) != self.n:
                raise RankDeficientError("generators are dependent at the base point")

    @property
    def N(self) -> int:
        return self.ring.ngens

    @property
    def p(self) -> int:
        return len(self.coframe)

    @property
    def n(self) -> int:
        return self.N - self.p

    def coframe_matrix(self, point: Optional[Sequence[Any]] = None) -> ExactMatrix:
        """p x N matrix Lambda_x"""
        point = self.base_point if point is None else point
        if not self.coframe:
            return ExactMatrix.zeros(0, self.N)
        return ExactMatrix.from_rows([form.value_at(point) for form in self.coframe], QQ, cols=self.N)

    def kernel_basis(self) -> Tuple[Tuple[Any, ...], ...]:
        """Basis of D_x = ker Lambda_x, one vector per free column"""
        from exactalg import nullspace_basis

        if "kernel" not in self._cache:
            self._cache["kernel"] = tuple(nullspace_basis(self.coframe_matrix()))
        return self._cache["kernel"]

    def spanning_fields(self) -> Tuple[VectorField, ...]:
        if "spanning" not in self._cache:
            self._cache["spanning"] = self.generators if self.generators is not None else spanning_fields(self)
        return self._cache["spanning"]

    def recombined(self, weights: Sequence[Sequence[Any]], name: Optional[str] = None) -> "Distribution":
        """Same distribution with coframe rows G lambda for an invertible constant G"""
        G = ExactMatrix.from_rows(weights, QQ, cols=self.p)
        if G.rows != self.p or exact_rank(G) != self.p:
            raise RankDeficientError("recombination matrix must be invertible")
        forms = tuple(linear_combination(self.coframe, G.row(i)) for i in range(self.p))
        return Distribution(self.ring, forms, self.base_point, self.generators, name or self.name)

    def with_base_point(self, point: Sequence[Any]) -> "Distribution":
        return Distribution(self.ring, self.coframe, tuple(point), self.generators, self.name)


def spanning_fields(D: Distribution) -> Tuple[VectorField, ...]:
    """
    Polynomial fields spanning D near the base point.

    With P the leftmost pivot columns of Lambda_x and f a free column,
    v_f = det(Lambda_P) e_f - adj(Lambda_P) Lambda_f, divided by det(Lambda_P)
    when that determinant is a nonzero constant.
    """
    ring, N, p = D.ring, D.N, D.p
    if p == 0:
        return tuple(VectorField.coordinate(ring, i) for i in range(N))
    pivots = pivot_columns(D.coframe_matrix())
    free = [j for j in range(N) if j not in pivots]
    domain = ring.to_domain()
    lam_p = DomainMatrix(
        [[domain.convert(D.coframe[s].coefficients[c]) for c in pivots] for s in range(p)], (p, p), domain
    )
    adj, det = lam_p.adj_det()
    adj_rows = adj.to_list()
    constant = det.is_ground
    fields = []
    for f in free:
        column = [D.coframe[s].coefficients[f] for s in range(p)]
        comps = [ring.zero] * N
        comps[f] = ring.one if constant else det
        for k, c in enumerate(pivots):
            value = ring.zero
            for s in range(p):
                if adj_rows[k][s] and column[s]:
                    value += adj_rows[k][s] * column[s]
            comps[c] = -value
            if constant:
                comps[c] = comps[c].quo_ground(det.LC) if comps[c] else comps[c]
        fields.append(VectorField(ring, tuple(comps)))
    logger.debug(f"spanning fields from coframe: pivots {pivots}, {len(fields)} fields")
    return tuple(fields)


def _extend_basis(basis: List[Tuple[Any, ...]], rank: int, vector: Tuple[Any, ...]) -> bool:
    candidate = ExactMatrix.from_columns(basis + [vector], len(vector))
    if exact_rank(candidate) > rank:
        basis.append(vector)
        return True
    return False


def flag_at_point(
    D: Distribution, max_step: Optional[int] = None, max_fields: int = MAX_FIELDS_PER_LEVEL
) -> FlagData:
    """
    Growth vector and pointwise flag bases at the base point.

    Level i+1 generators are the nonzero brackets [X, Y] with X spanning and Y
    first produced at level i. Levels whose pointwise span does not grow are
    recorded with a zero jump; iteration stops when the span is everything,
    no new nonzero bracket appears, or max_step levels were produced.

    A level that hits max_fields keeps its first brackets only and is listed in
    capped_levels; the growth vector may then be understated.
    """
    N = D.N
    max_step = 2 * N if max_step is None else max_step
    if max_step < 1:
        raise PreconditionError(f"max_step must be at least 1, got {max_step}")
    point = D.base_point
    spanning = D.spanning_fields()
    current = tuple(FieldRecord(X, 1) for X in spanning)
    basis: List[Tuple[Any, ...]] = []
    for rec in current:
        _extend_basis(basis, len(basis), rec.field.value_at(point))
    dims = [0, len(basis)]
    levels = [current]
    seen = {X.components for X in spanning}
    capped: List[int] = []
    step = 1
    while step < max_step and len(basis) < N and current:
        produced: List[FieldRecord] = []
        for i, X in enumerate(spanning):
            for rec in current:
                Z = lie_bracket(X, rec.field)
                if Z.is_zero() or Z.components in seen:
                    continue
                seen.add(Z.components)
                produced.append(FieldRecord(Z, step + 1, i, rec))
                if len(produced) >= max_fields:
                    break
            if len(produced) >= max_fields:
                logger.warning(f"flag level {step + 1}: keeping the first {max_fields} brackets")
                capped.append(step + 1)
                break
        if not produced:
            break
        for rec in produced:
            _extend_basis(basis, len(basis), rec.field.value_at(point))
        step += 1
        dims.append(len(basis))
        levels.append(tuple(produced))
        current = tuple(produced)
        logger.debug(f"flag level {step}: dimension {len(basis)} from {len(produced)} brackets")
    while len(dims) > 2 and dims[-1] == dims[-2]:
        dims.pop()
        levels.pop()
    growth = GrowthVector(tuple(dims))
    generating = dims[-1] == N
    logger.info(f"flag of {D.name or 'distribution'}: type {growth}, bracket-generating={generating}")
    capped = [lv for lv in capped if lv <= len(levels)]
    return FlagData(growth, spanning, tuple(levels), tuple(basis), tuple(dims), generating, max_step, tuple(capped))
