import pytest
from sympy import QQ

from exactalg import ExactMatrix, ParseError, PreconditionError, RankDeficientError, exact_rank
from geometry import (
    GrowthVector,
    VectorField,
    adapted_frame,
    d_oneform_eval,
    flag_at_point,
    from_strings,
    goursat,
    lie_bracket,
    named,
    spanning_fields,
)


def e(i, N):
    return tuple(QQ(1) if k == i else QQ(0) for k in range(N))


def neg(v):
    return tuple(-x for x in v)


class TestGrowthVector:
    def test_parse(self):
        gv = GrowthVector.parse("0,10,12,14")
        assert gv.m == (0, 10, 12, 14)
        assert gv.step == 2
        assert gv.rank == 10
        assert gv.corank == 4
        assert gv.jumps == (2, 2)
        assert str(gv) == "(0, 10, 12, 14)"

    @pytest.mark.parametrize("text", ["0,x", "1,2,3", "0,3,2", "0", "0,0,1"])
    def test_rejects_malformed(self, text):
        with pytest.raises(ParseError):
            GrowthVector.parse(text)

    def test_compressed_drops_zero_jumps(self):
        assert GrowthVector((0, 2, 2, 3)).compressed().m == (0, 2, 3)
        assert GrowthVector((0, 2, 3, 4)).level_offset(2) == 1


class TestFields:
    def test_contact_bracket(self, contact_D):
        X1, X2 = spanning_fields(contact_D)
        assert X1.value_at((0, 0, 0)) == e(0, 3)
        assert X2.value_at((0, 0, 0)) == e(1, 3)
        assert lie_bracket(X1, X2).value_at((0, 0, 0)) == neg(e(2, 3))

    def test_d_lambda_on_generators_is_plus_one(self, contact_D):
        X1, X2 = spanning_fields(contact_D)
        value = d_oneform_eval(contact_D.coframe[0], X1, X2)
        assert value == contact_D.ring.one

    def test_closed_forms(self, integrable_D, contact_D):
        assert integrable_D.coframe[0].is_closed()
        assert not contact_D.coframe[0].is_closed()

    def test_coordinate_fields_commute(self, flat_D):
        X, Y = flat_D.spanning_fields()
        assert lie_bracket(X, Y).is_zero()
        assert isinstance(X, VectorField)


class TestDistribution:
    def test_rank_deficient_coframe(self):
        with pytest.raises(RankDeficientError):
            from_strings([["y1", "0", "0"]], 3)

    def test_generator_must_annihilate(self):
        with pytest.raises(PreconditionError):
            from_strings([["0", "0", "1"]], 3, generators=[["1", "0", "1"], ["0", "1", "0"]])

    def test_kernel_basis(self, contact_D):
        assert contact_D.kernel_basis() == (e(0, 3), e(1, 3))

    def test_named(self):
        assert named("goursat-2").N == 4
        with pytest.raises(PreconditionError):
            named("nope")
        with pytest.raises(PreconditionError):
            goursat(0)


class TestFlag:
    @pytest.mark.parametrize(
        "name,growth,generating",
        [
            ("contact", (0, 2, 3), True),
            ("engel", (0, 2, 3, 4), True),
            ("goursat-3", (0, 2, 3, 4, 5), True),
            ("martinet", (0, 2, 2, 3), True),
            ("integrable", (0, 2), False),
            ("flat", (0, 2), False),
        ],
    )
    def test_growth(self, name, growth, generating):
        flag = flag_at_point(named(name))
        assert flag.growth.m == growth
        assert flag.bracket_generating is generating

    def test_max_step_truncates(self, engel_D):
        flag = flag_at_point(engel_D, max_step=2)
        assert flag.growth.m == (0, 2, 3)
        assert not flag.bracket_generating

    def test_bracket_cap_is_reported(self, engel_D):
        flag = flag_at_point(engel_D, max_fields=1)
        assert 2 in flag.capped_levels
        assert all(len(level) == 1 for level in flag.levels[1:])
        assert flag_at_point(engel_D).capped_levels == ()

    @pytest.mark.slow
    def test_toy_growth(self, toy_D):
        assert flag_at_point(toy_D).growth.m == (0, 10, 12, 14)


class TestAdaptedFrame:
    def test_contact(self, contact_frame):
        assert contact_frame.labels == ((1, 1),)
        assert contact_frame.tau[(1, 1)] == e(0, 3)
        assert contact_frame.eta[(1, 1)] == e(1, 3)
        assert contact_frame.zeta[(1, 1)] == e(2, 3)
        assert contact_frame.is_triangular()

    def test_engel(self, engel_frame):
        assert engel_frame.labels == ((1, 1), (2, 1))
        assert engel_frame.tau[(1, 1)] == e(0, 4)
        assert engel_frame.eta[(1, 1)] == e(3, 4)
        assert engel_frame.zeta[(1, 1)] == e(1, 4)
        assert engel_frame.tau[(2, 1)] == e(0, 4)
        assert engel_frame.eta[(2, 1)] == neg(e(1, 4))
        assert engel_frame.zeta[(2, 1)] == neg(e(2, 4))
        assert engel_frame.is_triangular()

    @pytest.mark.parametrize("name", ["contact", "engel"])
    def test_eta_lies_on_its_own_level(self, name):
        D = named(name)
        flag = flag_at_point(D)
        frame = adapted_frame(D, flag=flag)
        for s, j in frame.labels:
            eta = frame.eta[(s, j)]
            upper = list(flag.basis_upto(s))
            lower = list(flag.basis_upto(s - 1)) if s > 1 else []
            assert exact_rank(ExactMatrix.from_columns(upper + [eta], D.N)) == len(upper)
            assert exact_rank(ExactMatrix.from_columns(lower + [eta], D.N)) == len(lower) + 1

    def test_duality(self, engel_frame):
        M = engel_frame.duality_matrix()
        assert M[0, 0] == 1 and M[1, 1] == 1
        assert M[0, 1] == 0 and M[1, 0] == 0

    def test_rejects_non_generating(self, integrable_D):
        with pytest.raises(PreconditionError):
            adapted_frame(integrable_D)

    def test_rejects_wrong_type(self, contact_D):
        with pytest.raises(PreconditionError):
            adapted_frame(contact_D, GrowthVector((0, 2, 3, 4)))

    def test_unknown_pivot_rule(self, contact_D):
        with pytest.raises(PreconditionError):
            adapted_frame(contact_D, pivot_rule="middle")
