import pytest
from sympy import QQ

from exactalg import ArityMismatchError, IndexRangeError, NonTangentError, PreconditionError
from jets import (
    CurveJet,
    PolyCurve,
    TauAssignment,
    TauLabel,
    fiber_point,
    is_tangent,
    kernel_coordinates,
    pullback_jet,
    symbolic_fiber,
    tangency_solve,
    vanishing_order,
)

Z = QQ(0)
ONE = QQ(1)


class TestCurveJet:
    def test_polynomial_curve_jet(self, contact_curve):
        jet = contact_curve.jet(0, 3)
        assert jet.derivatives == ((Z, Z, Z), (ONE, ONE, Z), (Z, Z, ONE), (Z, Z, Z))
        assert jet.order == 3
        assert jet.truncate(1).order == 1

    def test_series_uses_taylor_coefficients(self, engel_curve):
        series = engel_curve.jet(0, 3).series()
        assert series[2].coeffs == (Z, Z, Z, QQ(1, 6))

    def test_mismatched_lengths(self):
        with pytest.raises(ArityMismatchError):
            CurveJet(((0, 0), (1, 0, 0)))

    def test_cannot_extend_by_truncation(self, contact_curve):
        with pytest.raises(PreconditionError):
            contact_curve.jet(0, 1).truncate(2)

    def test_perturbed(self, contact_curve):
        bumped = contact_curve.perturbed([0, 0, 1], 3)
        assert bumped.jet(0, 3)[3] == (Z, Z, QQ(6))


class TestTauAssignment:
    def test_zero_label_clears(self):
        tau = TauAssignment()
        tau[2] = TauLabel.tau(1, 1)
        tau[2] = TauLabel.zero()
        assert tau.nonzero_levels() == ()
        assert tau[5].is_zero

    def test_merge_conflict(self):
        a = TauAssignment({1: TauLabel.tau(1, 1)})
        b = TauAssignment({1: TauLabel.tau(2, 1)})
        with pytest.raises(PreconditionError):
            a.merged(b)

    def test_labels_print(self):
        assert str(TauLabel.tau(2, 1)) == "tau^{2,1}"
        assert str(TauLabel.zero()) == "0"

    def test_frame_label_needs_frame(self):
        with pytest.raises(PreconditionError):
            TauLabel.tau(1, 1).resolve()


class TestPullback:
    def test_horizontal_curve(self, contact_D, contact_curve):
        jet = contact_curve.jet(0, 3)
        assert all(x == 0 for x in pullback_jet(contact_D.coframe, jet)[0])
        assert is_tangent(contact_D.coframe, jet)
        assert vanishing_order(contact_D.coframe, jet) == 2

    def test_non_horizontal_curve(self, contact_D):
        # lambda(u) du/dt = -t along (t, t, 0)
        jet = PolyCurve.from_coefficients([[0, 1], [0, 1], [0]]).jet(0, 2)
        assert pullback_jet(contact_D.coframe, jet) == ((Z, QQ(-1)),)
        assert vanishing_order(contact_D.coframe, jet) == 0
        assert not is_tangent(contact_D.coframe, jet)

    def test_engel_curve_is_horizontal(self, engel_D, engel_curve):
        assert is_tangent(engel_D.coframe, engel_curve.jet(0, 4))


class TestTangencySolve:
    def test_zero_free_part(self, contact_D):
        jet = tangency_solve(contact_D, [1, 0, 0], 2)
        assert jet.derivatives[2:] == ((Z, Z, Z), (Z, Z, Z))
        assert is_tangent(contact_D.coframe, jet)

    def test_free_part_feeds_next_level(self, contact_D):
        jet = tangency_solve(contact_D, [1, 0, 0], 2, free={1: [0, 1]})
        assert jet[2] == (Z, ONE, Z)
        assert jet[3] == (Z, Z, ONE)
        assert is_tangent(contact_D.coframe, jet)

    def test_engel_completion_is_horizontal(self, engel_D):
        jet = tangency_solve(engel_D, [1, 0, 0, 0], 3, free=[[0, 1], [1, 0], [0, 2]])
        assert is_tangent(engel_D.coframe, jet)

    def test_rejects_non_horizontal_first_jet(self, contact_D):
        with pytest.raises(NonTangentError):
            tangency_solve(contact_D, [0, 0, 1], 1)
        with pytest.raises(ArityMismatchError):
            tangency_solve(contact_D, [1, 0], 1)

    def test_free_level_range(self, contact_D):
        with pytest.raises(IndexRangeError):
            tangency_solve(contact_D, [1, 0, 0], 1, free={2: [0, 1]})

    def test_kernel_coordinates(self, contact_D):
        assert kernel_coordinates(contact_D, [2, 3, 0]) == (QQ(2), QQ(3))
        with pytest.raises(NonTangentError):
            kernel_coordinates(contact_D, [0, 0, 1])


class TestSymbolicFiber:
    def test_indeterminate_enters_at_its_level(self, contact_D):
        tau = TauAssignment({1: TauLabel.explicit([0, 1, 0])})
        jet = symbolic_fiber(contact_D, [1, 0, 0], 2, tau)
        assert jet.indeterminates() == (1,)
        assert jet.variables_in(1) == ()
        assert jet.variables_in(2) == (1,)
        assert jet.variables_in(3) == (1,)

    def test_specialize_matches_fiber_point(self, contact_D):
        tau = TauAssignment({1: TauLabel.explicit([0, 1, 0])})
        jet = symbolic_fiber(contact_D, [1, 0, 0], 2, tau)
        point = fiber_point(contact_D, [1, 0, 0], 2, tau, {1: 3})
        assert jet.specialize({1: 3}).derivatives == point.derivatives
        assert point[3] == (Z, Z, QQ(3))

    def test_frame_labels_resolve(self, contact_D, contact_frame):
        tau = TauAssignment({1: TauLabel.tau(1, 1)})
        jet = symbolic_fiber(contact_D, [1, 0, 0], 1, tau, contact_frame)
        assert jet.specialize([5]).derivatives[2] == (QQ(5), Z, Z)

    def test_tau_must_be_horizontal(self, contact_D):
        tau = TauAssignment({1: TauLabel.explicit([0, 0, 1])})
        with pytest.raises(NonTangentError):
            symbolic_fiber(contact_D, [1, 0, 0], 1, tau)

    def test_no_indeterminates_gives_rational_jet(self, contact_D):
        jet = symbolic_fiber(contact_D, [1, 0, 0], 1, TauAssignment())
        assert not jet.is_symbolic
