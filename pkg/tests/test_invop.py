import pytest
from sympy import QQ

from exactalg import TIME, TIME_RING, ExactMatrix, NotRegularError, PreconditionError, pivot_columns
from invop import (
    FRAC,
    DiffOp,
    apply,
    evaluate_fraction,
    invert,
    linearization,
    numeric_residual,
    op_adjoint,
    op_compose,
    sample_grid,
    select_pivots,
    verify_right_inverse,
    working_interval,
)
from jets import PolyCurve
from regmat import build_A


def strings(M):
    return [[str(FRAC.to_sympy(x)) for x in row] for row in M.tolist()]


class TestDiffOp:
    def test_leibniz(self):
        t_times = DiffOp.multiplication(ExactMatrix.from_rows([[TIME]], FRAC))
        composite = op_compose(DiffOp.d_dt(1), t_times)
        assert composite.order == 1
        assert apply(composite, [TIME]) == (2 * TIME,)

    def test_adjoint_of_derivative(self):
        adjoint = op_adjoint(DiffOp.d_dt(2))
        assert adjoint.coefficient(1)[0, 0] == -1
        assert adjoint.coefficient(0).is_zero()

    def test_adjoint_is_involutive(self):
        S = DiffOp.from_matrices([[[1, TIME]], [[TIME**2, 0]]], 2, 1)
        twice = op_adjoint(op_adjoint(S))
        assert (twice - S).trimmed().is_zero()

    def test_trimmed(self):
        assert DiffOp.zero(2, 2, 3).trimmed().order == 0

    def test_evaluate_fraction(self):
        f = 1 / (TIME - 1)
        assert evaluate_fraction(f, 3) == QQ(1, 2)
        with pytest.raises(PreconditionError):
            evaluate_fraction(f, 1)

    def test_numeric_residual_of_identity(self):
        identity = DiffOp.identity(2)
        assert numeric_residual(identity, identity, [0.0, 0.5], 2) == 0.0


class TestWorkingInterval:
    def test_constant_minor(self):
        interval = working_interval(TIME_RING(-1), 0)
        assert interval.lower is None and interval.upper is None

    def test_root_bounds(self):
        t = TIME_RING.gens[0]
        interval = working_interval(t - 1, 0)
        assert interval.lower is None
        assert interval.upper == QQ(1)
        assert interval.contains(QQ(1, 2))
        assert not interval.contains(2)

    def test_root_at_t0(self):
        t = TIME_RING.gens[0]
        with pytest.raises(NotRegularError):
            working_interval(t * (t + 2), 0)


class TestInversion:
    def test_contact_linearization(self, contact_D, contact_curve):
        L = linearization(contact_D, contact_curve)
        assert strings(L.coefficient(0)) == [["0", "-1", "0"]]
        assert strings(L.coefficient(1)) == [["-t", "0", "1"]]

    def test_contact_inverse(self, contact_D, contact_curve):
        result = invert(contact_D, contact_curve, 0, 0)
        assert strings(result.S.coefficient(0)) == [["1", "0", "t"]]
        assert result.pivots == (0, 2)
        assert result.denominator == TIME_RING(-1)
        assert result.interval.lower is None and result.interval.upper is None
        residuals = verify_right_inverse(result.L, result.M, 3, sample_grid(result.interval, 0))
        assert residuals.exact_zero
        assert residuals.numeric == pytest.approx(0.0)

    def test_pivots_prefer_lowest_degree_minor(self, contact_D, contact_curve):
        # at t0 = 1 the leftmost columns (0, 1) have minor t, while (0, 2) has minor -1
        assert pivot_columns(build_A(contact_D, contact_curve.jet(1, 1), 0).matrix) == (0, 1)
        result = invert(contact_D, contact_curve, 1, 0)
        assert result.pivots == (0, 2)
        assert result.denominator == TIME_RING(-1)
        assert result.interval.lower is None and result.interval.upper is None
        assert strings(result.S.coefficient(0)) == [["1", "0", "t"]]

    def test_pivots_skip_minors_vanishing_at_t0(self, contact_D, contact_curve):
        A = build_A(contact_D, contact_curve.symbolic_jet(1), 0).matrix
        assert select_pivots(A, build_A(contact_D, contact_curve.jet(0, 1), 0).matrix) == (0, 2)
        assert select_pivots(A, build_A(contact_D, contact_curve.jet(2, 1), 0).matrix) == (0, 2)

    def test_engel_inverse(self, engel_D, engel_curve):
        result = invert(engel_D, engel_curve, 0, 1)
        assert result.S.order == 1
        assert verify_right_inverse(result.L, result.M, 2).exact_zero

    def test_non_regular_curve(self, integrable_D):
        curve = PolyCurve.from_coefficients([[0, 1], [0], [0]])
        with pytest.raises(NotRegularError):
            invert(integrable_D, curve, 0, 0)

    def test_sample_grid_stays_inside(self):
        t = TIME_RING.gens[0]
        grid = sample_grid(working_interval(t - QQ(1, 4), 0), 0)
        assert max(grid) < 0.25
        assert 0.0 in grid


class TestOperatorIdentities:
    def test_adjoint_reverses_composition(self):
        S = DiffOp.from_matrices([[[1, TIME]], [[TIME**2, 3]]], 2, 1)
        R = DiffOp.from_matrices([[[TIME, 0], [1, TIME]], [[0, 1], [2, 0]]], 2, 2)
        lhs = op_adjoint(op_compose(S, R))
        rhs = op_compose(op_adjoint(R), op_adjoint(S))
        assert (lhs - rhs).trimmed().is_zero()

    def test_product_rule(self):
        f = DiffOp.multiplication(ExactMatrix.from_rows([[TIME**2 + 1]], FRAC))
        composite = op_compose(DiffOp.d_dt(1), f)
        assert strings(composite.coefficient(0)) == [["2*t"]]
        assert strings(composite.coefficient(1)) == [["t**2 + 1"]]
