import random

import pytest
from sympy import QQ

from exactalg import (
    ExactMatrix,
    HJetError,
    NotRegularError,
    ParseError,
    PreconditionError,
    RankDeficientError,
    TruncatedSeries,
    ambient_ring,
    determinant,
    exact_rank,
    horner_evaluate,
    indeterminate_index,
    indeterminate_ring,
    inverse,
    modular_rank,
    nullspace_basis,
    parse_polynomial,
    parse_rational,
    pivot_columns,
    probabilistic_rank,
    rank_probabilistic,
    reduce_mod,
    right_inverse,
    series_compose,
    solve_particular,
)


class TestParsing:
    def test_rationals(self):
        assert parse_rational("3/4") == QQ(3, 4)
        assert parse_rational("-2") == QQ(-2)
        assert parse_rational(5) == QQ(5)

    @pytest.mark.parametrize("bad", ["1/0", "0.5", "x", True, 1.5])
    def test_bad_rationals(self, bad):
        with pytest.raises(ParseError):
            parse_rational(bad)

    def test_polynomial(self):
        ring = ambient_ring(3)
        y1, y2, y3 = ring.gens
        assert parse_polynomial("y1^2 - 3*y2/2 + 1", ring) == y1**2 - QQ(3, 2) * y2 + 1
        assert parse_polynomial("(y1 + y3)**2", ring) == y1**2 + 2 * y1 * y3 + y3**2

    def test_unknown_variable_reports_column(self):
        ring = ambient_ring(3)
        with pytest.raises(ParseError) as info:
            parse_polynomial("y1 + x", ring)
        assert info.value.column == 6
        assert info.value.exit_code == 2

    @pytest.mark.parametrize("bad", ["y1 +", "1/y1", "", "y1 $ y2"])
    def test_rejects_non_polynomials(self, bad):
        with pytest.raises(ParseError):
            parse_polynomial(bad, ambient_ring(2))

    def test_indeterminate_ring(self):
        ring = indeterminate_ring((1, 3, 9))
        assert indeterminate_index(ring, 1) == 3
        with pytest.raises(PreconditionError):
            indeterminate_ring((3, 1))

    def test_horner(self):
        ring = ambient_ring(2)
        y1, y2 = ring.gens
        f = y1**2 * y2 - 3 * y2 + 1
        assert horner_evaluate(f, [QQ(2), QQ(1, 3)]) == QQ(4, 3) - 1 + 1


class TestErrors:
    def test_stage_first_tag_wins(self):
        error = NotRegularError("no").with_stage("regularity").with_stage("inversion")
        assert error.stage == "regularity"
        assert error.exit_code == 4

    def test_parse_error_location(self):
        error = ParseError("bad token", line=3, column=5, path="p.json")
        assert str(error) == "bad token (p.json, line 3, column 5)"
        assert isinstance(error, HJetError)

    def test_precondition_is_value_error(self):
        assert issubclass(RankDeficientError, ValueError)


class TestMatrices:
    def test_rank_and_determinant(self):
        M = ExactMatrix.from_rows([[1, 2], [3, 4]])
        assert exact_rank(M) == 2
        assert determinant(M) == QQ(-2)
        assert inverse(M) @ M == ExactMatrix.identity(2)
        singular = ExactMatrix.from_rows([[1, 2], [2, 4]])
        assert exact_rank(singular) == 1
        with pytest.raises(RankDeficientError):
            inverse(singular)

    def test_right_inverse_of_contact_coframe(self):
        lam = ExactMatrix.from_rows([[0, 0, 1]])
        R = right_inverse(lam)
        assert R.shape == (3, 1)
        assert lam @ R == ExactMatrix.identity(1)
        assert pivot_columns(lam) == (2,)

    def test_nullspace(self):
        lam = ExactMatrix.from_rows([[0, 0, 1]])
        assert nullspace_basis(lam) == [(QQ(1), QQ(0), QQ(0)), (QQ(0), QQ(1), QQ(0))]

    def test_solve_particular(self):
        assert solve_particular(ExactMatrix.from_rows([[1, 1]]), [2]) == (QQ(2), QQ(0))
        assert solve_particular(ExactMatrix.from_rows([[1, 1], [2, 2]]), [1, 3]) is None

    def test_block_map_must_partition(self):
        with pytest.raises(PreconditionError):
            ExactMatrix.from_rows([[1, 2], [3, 4]], blocks={(0, 0): (0, 1, 0, 1)})

    def test_probabilistic_rank(self):
        ring = indeterminate_ring((1, 2))
        X1, X2 = ring.gens
        domain = ring.to_domain()
        deficient = ExactMatrix.from_rows([[X1, X2], [X1 * X2, X2**2]], domain)
        estimate = probabilistic_rank(deficient, rng=random.Random(1))
        assert estimate.rank == 1 and estimate.exact
        full = ExactMatrix.from_rows([[X1, 1], [0, X2]], domain)
        estimate = probabilistic_rank(full, rng=random.Random(1))
        assert estimate.rank == 2
        assert estimate.failure_bound == 0.0

    def test_reduce_mod(self):
        assert reduce_mod(QQ(1, 2), 7) == 4
        assert reduce_mod(QQ(-3), 7) == 4
        with pytest.raises(PreconditionError):
            reduce_mod(QQ(1, 7), 7)


class TestSeries:
    def test_product_truncates(self):
        a = TruncatedSeries((QQ(1), QQ(1), QQ(0)))
        b = TruncatedSeries((QQ(1), QQ(-1), QQ(0)))
        assert (a * b).coeffs == (QQ(1), QQ(0), QQ(-1))
        assert (a * b.truncate(1)).order == 1

    def test_compose(self):
        f = TruncatedSeries((QQ(1), QQ(1), QQ(1)))
        inner = TruncatedSeries((QQ(0), QQ(2), QQ(0)))
        assert f.compose(inner).coeffs == (QQ(1), QQ(2), QQ(4))
        with pytest.raises(PreconditionError):
            f.compose(TruncatedSeries((QQ(1), QQ(0), QQ(0))))

    def test_derivatives(self):
        s = TruncatedSeries.from_derivatives([QQ(0), QQ(1), QQ(2), QQ(6)])
        assert s.coeffs == (QQ(0), QQ(1), QQ(1), QQ(1))
        assert s.derivative_at(3) == QQ(6)
        assert s.derivative().coeffs == (QQ(1), QQ(2), QQ(3))

    def test_series_compose(self):
        ring = ambient_ring(2)
        y1, y2 = ring.gens
        u = [TruncatedSeries((QQ(0), QQ(1), QQ(0))), TruncatedSeries((QQ(1), QQ(1), QQ(0)))]
        assert series_compose(y1 * y2, u).coeffs == (QQ(0), QQ(1), QQ(1))
        assert series_compose(ring(3), u).coeffs == (QQ(3), QQ(0), QQ(0))

    def test_series_compose_square(self):
        ring = ambient_ring(1)
        (y1,) = ring.gens
        u = [TruncatedSeries((QQ(1), QQ(1), QQ(1, 2)))]
        assert series_compose(y1**2, u).coeffs == (QQ(1), QQ(2), QQ(2))


class TestRankExamples:
    def test_contact_block(self):
        assert exact_rank(ExactMatrix.from_rows([[-1, 1, 0], [0, 0, 1]])) == 2

    def test_rank_is_permutation_invariant(self):
        M = ExactMatrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        P = ExactMatrix.from_rows([[0, 1, 1], [1, 2, 3], [4, 8, 12]])
        assert exact_rank(M) == exact_rank(P) == 2

    def test_rank_probabilistic(self):
        ring = indeterminate_ring((1,))
        (X1,) = ring.gens
        domain = ring.to_domain()
        assert rank_probabilistic(ExactMatrix.from_rows([[X1]], domain), bound=100) == 1
        assert rank_probabilistic(ExactMatrix.from_rows([[X1, X1], [X1, X1]], domain)) == 1

    @pytest.mark.parametrize("seed", range(5))
    def test_modular_rank_bounds_exact_rank(self, seed):
        rng = random.Random(seed)
        rows, cols = rng.randint(2, 6), rng.randint(2, 8)
        M = ExactMatrix.from_rows([[QQ(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(cols)] for _ in range(rows)])
        deficient = ExactMatrix.from_rows(list(M.entries) + [tuple(a + b for a, b in zip(M.row(0), M.row(1)))])
        assert modular_rank(M) == exact_rank(M)
        assert modular_rank(deficient) == exact_rank(deficient) == exact_rank(M)

    def test_modular_rank_drops_at_the_prime(self):
        M = ExactMatrix.from_rows([[7, 0], [0, 1]])
        assert modular_rank(M, 7) == 1 < exact_rank(M)
        with pytest.raises(PreconditionError):
            modular_rank(ExactMatrix.from_rows([[QQ(1, 7)]]), 7)

    def test_right_inverse_pivot_rule(self):
        R = right_inverse(ExactMatrix.from_rows([[1, 0, 0]]))
        assert R.column(0) == (QQ(1), QQ(0), QQ(0))
        assert right_inverse(ExactMatrix.identity(2)) == ExactMatrix.identity(2)
        with pytest.raises(RankDeficientError):
            right_inverse(ExactMatrix.from_rows([[1, 1], [1, 1]]))
