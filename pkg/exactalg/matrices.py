"""
Exact dense matrices over sympy domains.

ExactMatrix is the carrier for Λ, R_u, A, B and C. Elimination is delegated
to sympy's DomainMatrix: fraction-free row reduction for ranks and
determinants, field RREF with leftmost pivots for right inverses and
particular solutions.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import ArityMismatchError, PreconditionError, RankDeficientError
from .polynomials import horner_evaluate, max_total_degree, reduce_mod

logger = logging.getLogger(__name__)

# (row-block, col-block) -> (row offset, row extent, col offset, col extent)
BlockMap = Dict[Tuple[int, int], Tuple[int, int, int, int]]

SYMBOLIC_RANK_LIMIT = 12


@dataclass(frozen=True)
class ExactMatrix:
    """Dense rows x cols matrix with entries in a sympy domain"""

    rows: int
    cols: int
    entries: Tuple[Tuple[Any, ...], ...]
    domain: Any = QQ
    blocks: Optional[BlockMap] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ArityMismatchError(f"entries do not match the declared shape {self.rows}x{self.cols}")
        if self.blocks is not None:
            self._check_blocks()

    def _check_blocks(self):
        row_cover = [0] * self.rows
        col_cover: Dict[int, Tuple[int, int]] = {}
        row_ranges: Dict[int, Tuple[int, int]] = {}
        for (rb, cb), (r0, rn, c0, cn) in self.blocks.items():
            if r0 < 0 or c0 < 0 or r0 + rn > self.rows or c0 + cn > self.cols:
                raise PreconditionError(f"block ({rb},{cb}) exceeds the matrix")
            if row_ranges.setdefault(rb, (r0, rn)) != (r0, rn) or col_cover.setdefault(cb, (c0, cn)) != (c0, cn):
                raise PreconditionError(f"block ({rb},{cb}) disagrees with its row or column band")
        for r0, rn in row_ranges.values():
            for i in range(r0, r0 + rn):
                row_cover[i] += 1
        cols = [0] * self.cols
        for c0, cn in col_cover.values():
            for j in range(c0, c0 + cn):
                cols[j] += 1
        if any(c != 1 for c in row_cover) or any(c != 1 for c in cols):
            raise PreconditionError("block map does not partition the index ranges")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], domain: Any = QQ, cols: Optional[int] = None,
                  blocks: Optional[BlockMap] = None) -> "ExactMatrix":
        data = tuple(tuple(domain.convert(x) for x in row) for row in rows)
        ncols = cols if cols is not None else (len(data[0]) if data else 0)
        return cls(len(data), ncols, data, domain, blocks)

    @classmethod
    def zeros(cls, rows: int, cols: int, domain: Any = QQ) -> "ExactMatrix":
        return cls(rows, cols, tuple((domain.zero,) * cols for _ in range(rows)), domain)

    @classmethod
    def identity(cls, n: int, domain: Any = QQ) -> "ExactMatrix":
        return cls(
            n, n,
            tuple(tuple(domain.one if i == j else domain.zero for j in range(n)) for i in range(n)),
            domain,
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], rows: int, domain: Any = QQ) -> "ExactMatrix":
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], domain, cols=len(columns))

    @classmethod
    def from_domain_matrix(cls, dm: DomainMatrix, blocks: Optional[BlockMap] = None) -> "ExactMatrix":
        rows, cols = dm.shape
        return cls(rows, cols, tuple(tuple(r) for r in dm.to_list()), dm.domain, blocks)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: Tuple[int, int]) -> Any:
        i, j = key
        return self.entries[i][j]

    def row(self, i: int) -> Tuple[Any, ...]:
        return self.entries[i]

    def column(self, j: int) -> Tuple[Any, ...]:
        return tuple(r[j] for r in self.entries)

    def block(self, rb: int, cb: int) -> "ExactMatrix":
        if not self.blocks or (rb, cb) not in self.blocks:
            raise PreconditionError(f"no block ({rb},{cb}) in this matrix")
        r0, rn, c0, cn = self.blocks[(rb, cb)]
        return self.submatrix(range(r0, r0 + rn), range(c0, c0 + cn))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        rows, cols = list(rows), list(cols)
        return ExactMatrix(len(rows), len(cols), tuple(tuple(self.entries[i][j] for j in cols) for i in rows), self.domain)

    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix([list(r) for r in self.entries], self.shape, self.domain)

    def convert_to(self, domain: Any) -> "ExactMatrix":
        return ExactMatrix.from_rows(self.entries, domain, cols=self.cols, blocks=self.blocks)

    def map_entries(self, fn: Callable[[Any], Any], domain: Any) -> "ExactMatrix":
        return ExactMatrix(
            self.rows, self.cols,
            tuple(tuple(domain.convert(fn(x)) for x in row) for row in self.entries),
            domain, self.blocks,
        )

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)), self.domain)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ArityMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self.to_domain_matrix().unify(other.to_domain_matrix())
        return ExactMatrix.from_domain_matrix(a.matmul(b))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ArityMismatchError(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix(self.rows, self.cols, tuple(
            tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)
        ), self.domain)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + other.scale(-1)

    def scale(self, factor: Any) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, tuple(tuple(x * factor for x in r) for r in self.entries), self.domain, self.blocks)

    def apply(self, vector: Sequence[Any]) -> Tuple[Any, ...]:
        """Matrix-vector product with entries combined in the matrix domain"""
        if len(vector) != self.cols:
            raise ArityMismatchError(f"{self.cols}-column matrix applied to a {len(vector)}-vector")
        out = []
        for row in self.entries:
            total = self.domain.zero
            for x, v in zip(row, vector):
                if x and v:
                    total = total + x * v
            out.append(total)
        return tuple(out)

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)

    def evaluate(self, values: Sequence[Any]) -> "ExactMatrix":
        """Rational matrix obtained by substituting ``values`` for the ring generators"""
        if not _is_polynomial_domain(self.domain):
            return self
        point = [QQ.convert(v) for v in values]
        return ExactMatrix(
            self.rows, self.cols,
            tuple(tuple(QQ.convert(horner_evaluate(x, point)) for x in row) for row in self.entries),
            QQ, self.blocks,
        )

    def tolist(self) -> List[List[Any]]:
        return [list(r) for r in self.entries]

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(self.domain.to_sympy(x)) for x in row) + "]" for row in self.entries)


def _is_polynomial_domain(domain: Any) -> bool:
    return bool(getattr(domain, "is_PolynomialRing", False))


def exact_rank(matrix: ExactMatrix) -> int:
    """Rank by fraction-free row reduction (exact, deterministic)"""
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    _, _, pivots = matrix.to_domain_matrix().rref_den(method="FF")
    return len(pivots)


@dataclass(frozen=True)
class RankEstimate:
    """Outcome of a randomized rank computation"""

    rank: int
    trials: int
    bound: int
    failure_bound: float
    exact: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rank": self.rank,
            "trials": self.trials,
            "bound": str(self.bound),
            "failure_bound": self.failure_bound,
            "exact": self.exact,
        }


def probabilistic_rank(
    matrix: ExactMatrix,
    trials: int = 5,
    bound: int = 2**64,
    rng: Optional[random.Random] = None,
    symbolic_fallback: bool = True,
) -> RankEstimate:
    """
    Lower bound for the generic rank of a polynomial matrix.

    Evaluates at ``trials`` uniformly random integer points in [1, bound] and
    keeps the largest exact rank. A deficient answer on a matrix with at most
    SYMBOLIC_RANK_LIMIT rows and columns is confirmed symbolically.
    """
    if trials < 1 or bound < 2:
        raise PreconditionError(f"need trials >= 1 and bound >= 2, got {trials}, {bound}")
    if not _is_polynomial_domain(matrix.domain):
        return RankEstimate(exact_rank(matrix), 0, bound, 0.0, True)
    rng = rng or random.Random(0)
    ngens = matrix.domain.ring.ngens
    best = 0
    full = min(matrix.rows, matrix.cols)
    for trial in range(trials):
        point = [rng.randint(1, bound) for _ in range(ngens)]
        rank = exact_rank(matrix.evaluate(point))
        logger.debug(f"rank trial {trial}: {rank}")
        best = max(best, rank)
        if best == full:
            break
    degree = full * max_total_degree([x for row in matrix.entries for x in row])
    failure = min(1.0, float(degree) / float(bound)) ** trials if best < full else 0.0
    if best < full and max(matrix.rows, matrix.cols) <= SYMBOLIC_RANK_LIMIT and symbolic_fallback:
        return RankEstimate(exact_rank(matrix), trials, bound, 0.0, True)
    return RankEstimate(best, trials, bound, failure, False)


def rank_probabilistic(matrix: ExactMatrix, trials: int = 5, bound: int = 2**64,
                       rng: Optional[random.Random] = None) -> int:
    return probabilistic_rank(matrix, trials, bound, rng).rank


def _field_rref(matrix: ExactMatrix):
    dm = matrix.to_domain_matrix()
    if not matrix.domain.is_Field:
        dm = dm.to_field()
    return dm.rref()


def pivot_columns(matrix: ExactMatrix) -> Tuple[int, ...]:
    """Leftmost pivot columns of the row echelon form"""
    if matrix.rows == 0 or matrix.cols == 0:
        return ()
    _, pivots = _field_rref(matrix)
    return tuple(pivots)


def inverse(matrix: ExactMatrix) -> ExactMatrix:
    if matrix.rows != matrix.cols:
        raise PreconditionError(f"cannot invert a {matrix.rows}x{matrix.cols} matrix")
    if matrix.rows == 0:
        return matrix
    dm = matrix.to_domain_matrix()
    if not matrix.domain.is_Field:
        dm = dm.to_field()
    if len(dm.rref()[1]) < matrix.rows:
        raise RankDeficientError("matrix is singular")
    return ExactMatrix.from_domain_matrix(dm.inv())


def determinant(matrix: ExactMatrix) -> Any:
    """Determinant by fraction-free (Bareiss) elimination; works over polynomial rings"""
    if matrix.rows != matrix.cols:
        raise PreconditionError(f"determinant of a non-square {matrix.shape} matrix")
    if matrix.rows == 0:
        return matrix.domain.one
    return matrix.to_domain_matrix().to_dense().det()


def right_inverse(matrix: ExactMatrix) -> ExactMatrix:
    """
    R with M R = Id for a full-row-rank M.

    Uses the leftmost pivot columns P of the RREF: R restricted to P is the
    inverse of M_P and the free rows of R are zero.
    """
    p, n = matrix.shape
    if p > n:
        raise RankDeficientError(f"a {p}x{n} matrix has no right inverse")
    pivots = pivot_columns(matrix)
    if len(pivots) < p:
        raise RankDeficientError(f"matrix has rank {len(pivots)} < {p}")
    domain = matrix.domain if matrix.domain.is_Field else matrix.domain.get_field()
    if p == 0:
        return ExactMatrix.zeros(n, 0, domain)
    inv = inverse(matrix.submatrix(range(p), pivots))
    rows = [[domain.zero] * p for _ in range(n)]
    for k, col in enumerate(pivots):
        rows[col] = list(inv.row(k))
    return ExactMatrix.from_rows(rows, domain, cols=p)


def solve_particular(matrix: ExactMatrix, rhs: Sequence[Any]) -> Optional[Tuple[Any, ...]]:
    """A solution of M x = rhs with free variables zero, or None if inconsistent"""
    p, n = matrix.shape
    if len(rhs) != p:
        raise ArityMismatchError(f"right-hand side of length {len(rhs)} for {p} equations")
    domain = matrix.domain if matrix.domain.is_Field else matrix.domain.get_field()
    if p == 0:
        return tuple(domain.zero for _ in range(n))
    augmented = ExactMatrix.from_rows(
        [list(matrix.row(i)) + [rhs[i]] for i in range(p)], domain, cols=n + 1
    )
    reduced, pivots = _field_rref(augmented)
    if n in pivots:
        return None
    solution = [domain.zero] * n
    dense = reduced.to_list()
    for k, col in enumerate(pivots):
        solution[col] = dense[k][n]
    return tuple(solution)


def nullspace_basis(matrix: ExactMatrix) -> List[Tuple[Any, ...]]:
    """Kernel basis: one vector per free column f with x_f = 1 and the other free variables 0"""
    p, n = matrix.shape
    domain = matrix.domain if matrix.domain.is_Field else matrix.domain.get_field()
    if p == 0:
        return [tuple(domain.one if i == j else domain.zero for i in range(n)) for j in range(n)]
    reduced, pivots = _field_rref(matrix)
    dense = reduced.to_list()
    basis = []
    for f in range(n):
        if f in pivots:
            continue
        v = [domain.zero] * n
        v[f] = domain.one
        for k, col in enumerate(pivots):
            v[col] = -dense[k][f]
        basis.append(tuple(v))
    return basis


def modular_rank(matrix: ExactMatrix, modulus: int = 2**31 - 1) -> int:
    """Rank of a rational matrix modulo a prime; a lower bound for the rank over QQ"""
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    A = np.array([[reduce_mod(x, modulus) for x in row] for row in matrix.entries], dtype=np.int64)
    rank = 0
    for c in range(matrix.cols):
        nz = np.nonzero(A[rank:, c])[0]
        if nz.size == 0:
            continue
        i = rank + int(nz[0])
        if i != rank:
            A[[rank, i]] = A[[i, rank]]
        inv = pow(int(A[rank, c]), -1, modulus)
        A[rank] = A[rank] * inv % modulus
        below = A[rank + 1:, c].copy()
        A[rank + 1:] = (A[rank + 1:] - np.outer(below, A[rank]) % modulus) % modulus
        rank += 1
        if rank == matrix.rows:
            break
    return rank
