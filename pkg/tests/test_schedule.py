import random
from dataclasses import replace

import numpy as np
import pytest

import schedule.witness as witness_module
from exactalg import (
    ExactMatrix,
    IndexRangeError,
    PreconditionError,
    StructureViolationError,
    determinant,
    exact_rank,
    indeterminate_ring,
)
from geometry import GrowthVector, adapted_frame
from jets import TauAssignment, TauLabel, fiber_point, symbolic_fiber
from regmat import RegularityVerdict, build_A
from schedule import (
    DEFAULT_MODULUS,
    ColumnTag,
    CReduction,
    CStructureReport,
    FrameLabel,
    RowTag,
    adapted_distribution,
    build_A1,
    build_B,
    build_schedule,
    check_C_structure,
    check_C_structure_by_evaluation,
    codim_witness,
    extend_schedule,
    label_table,
    level_schedule,
    q_bound,
    reduce_to_C,
    tau_table,
)

CONTACT = GrowthVector((0, 2, 3))
ENGEL = GrowthVector((0, 2, 3, 4))
TOY = GrowthVector((0, 10, 12, 14))


def random_growth(seed):
    """Seeded growth vector of rank 2..6 and step 1..3 with jumps of 1 or 2"""
    rng = random.Random(seed)
    m = [0, rng.randint(2, 6)]
    for _ in range(rng.randint(1, 3)):
        m.append(m[-1] + rng.randint(1, 2))
    return GrowthVector(tuple(m))


class TestSchedule:
    def test_contact(self):
        schedule = build_schedule(CONTACT)
        assert schedule.q_values == (1,)
        assert schedule.widths() == [1, 2]
        assert schedule.width_sum() == 3

    def test_engel(self):
        schedule = build_schedule(ENGEL)
        assert schedule.q_final == 6
        assert schedule.width_sum() == 16
        assert schedule.hat_blocks() == [1, 2, 6]
        assert schedule.designated == {1: 1, 2: 2, 6: 3}
        assert schedule.variables() == (1, 2, 3)

    def test_engel_tables(self):
        schedule = build_schedule(ENGEL)
        assert label_table(schedule) == [
            "Pick zeta^* for column-block 0",
            "Pick (zeta^*, eta^{1,1}) for column-block 1",
            "Pick (zeta-hat^{1,*}, eta^{2,1}) for column-block 2",
            "Pick zeta^* for column-blocks 3 to 5",
            "Pick (zeta^*, eta^{1,1}) for column-block 6",
        ]
        assert tau_table(schedule) == ["tau^1 = tau^{1,1}", "tau^2 = tau^{2,1}", "tau^3 = tau^{1,1}"]

    def test_toy(self):
        schedule = build_schedule(TOY)
        assert schedule.q_final == 46
        assert schedule.variables() == (1, 2, 3, 4, 9, 14, 15, 31)
        assert schedule.width_sum() == 4 * 48
        assert len(schedule.hat_blocks()) == 8

    def test_toy_two_rounds(self):
        assert q_bound(TOY, 2) == 460

    def test_engel_two_rounds(self):
        assert build_schedule(ENGEL, 2).q_values == (6, 18)

    @pytest.mark.parametrize("gv,K", [(CONTACT, 2), (CONTACT, 3), (ENGEL, 2), (TOY, 2)])
    def test_every_level_is_square(self, gv, K):
        for level in build_schedule(gv, K).levels():
            assert level["width_sum"] == level["size"]

    def test_level_layout(self):
        schedule = build_schedule(CONTACT, 2)
        level = level_schedule(schedule, 2)
        assert level.widths() == [1, 1, 2]
        assert level.designated == {2: 2}
        assert level.variables() == (1, 2)
        with pytest.raises(IndexRangeError):
            level_schedule(schedule, 3)

    def test_zero_jumps_are_compressed(self):
        assert build_schedule(GrowthVector((0, 2, 2, 3))).growth.m == (0, 2, 3)

    def test_bad_inputs(self):
        with pytest.raises(PreconditionError):
            build_schedule(ENGEL, 0)
        with pytest.raises(PreconditionError):
            build_schedule(GrowthVector((0, 3)))
        with pytest.raises(PreconditionError):
            build_schedule(GrowthVector((0, 2, 7)), q0=1)

    def test_extend(self):
        extended = extend_schedule(build_schedule(ENGEL), 8)
        assert extended.q_final == 8
        assert extended.labels[-1] == FrameLabel.full_zeta()
        with pytest.raises(PreconditionError):
            extend_schedule(build_schedule(ENGEL), 3)


class TestReduction:
    def test_contact_C(self, contact_D, contact_frame):
        schedule = build_schedule(CONTACT)
        tau = TauAssignment({1: TauLabel.tau(1, 1)})
        jet = symbolic_fiber(contact_D, [1, 0, 0], 1, tau, contact_frame)
        B = build_B(contact_D, contact_frame, schedule, jet)
        assert B.size == 3
        reduction = reduce_to_C(B)
        assert reduction.size == 1
        assert reduction.sign == 1
        X1 = jet.ring.gens[0]
        assert reduction.C[0, 0] == X1
        report = check_C_structure(reduction, schedule)
        assert report.valid
        assert report.designated[0]["variable"] == 1
        assert report.designated[0]["coefficient"] == "1"

    def contact_reduction(self, contact_D, contact_frame):
        schedule = build_schedule(CONTACT)
        tau = TauAssignment({1: TauLabel.tau(1, 1)})
        jet = symbolic_fiber(contact_D, [1, 0, 0], 1, tau, contact_frame)
        return schedule, reduce_to_C(build_B(contact_D, contact_frame, schedule, jet))

    def test_designated_entry_with_later_variable_is_rejected(self, contact_D, contact_frame):
        schedule, reduction = self.contact_reduction(contact_D, contact_frame)
        ring = indeterminate_ring((1, 2))
        X1, X2 = ring.gens
        bad = replace(reduction, C=ExactMatrix.from_rows([[X1 + X2**2]], ring.to_domain()))
        report = check_C_structure(bad, schedule)
        assert not report.valid
        assert "X2" in report.violations[0]["message"]
        with pytest.raises(StructureViolationError):
            report.raise_if_invalid()
        good = replace(reduction, C=ExactMatrix.from_rows([[3 * X1 + 2]], ring.to_domain()))
        report = check_C_structure(good, schedule)
        assert report.valid
        assert report.designated[0]["coefficient"] == "3"

    def test_evaluated_entry_with_later_variable_is_rejected(self):
        schedule = build_schedule(ENGEL)
        tags = [ColumnTag(1, "eta", (1, 1)), ColumnTag(2, "eta", (2, 1))]
        rows = [RowTag(0, (1, 1)), RowTag(0, (2, 1))]

        def fake(entries):
            def evaluate(values):
                C = np.array(entries(values[1], values[2], values[3]), dtype=np.int64) % DEFAULT_MODULUS
                return C, CReduction(C, [0, 1], [0, 1], rows, tags, 1, "modular", DEFAULT_MODULUS)

            return evaluate

        lower = fake(lambda x1, x2, x3: [[x1, 0], [3, x2 + x1]])
        report = check_C_structure_by_evaluation(lower, schedule, random.Random(1))
        assert report.valid
        assert report.det_ctilde == "1"
        later = fake(lambda x1, x2, x3: [[x1 + x3, 0], [3, x2]])
        report = check_C_structure_by_evaluation(later, schedule, random.Random(1))
        assert not report.valid
        assert report.violations[0]["column"] == 0
        assert "X3" in report.violations[0]["message"]


class TestWitness:
    def test_contact(self, contact_D, contact_frame):
        witness = codim_witness(contact_D, contact_frame)
        assert witness.mode == "symbolic"
        assert witness.polynomials == ["X1"]
        assert witness.variables == [[1]]
        assert witness.fresh == [True]
        assert witness.found and witness.regular
        assert witness.point[1] != 0

    def test_seed_is_reproducible(self, contact_D, contact_frame):
        a = codim_witness(contact_D, contact_frame, seed=7)
        b = codim_witness(contact_D, contact_frame, seed=7)
        assert a.point == b.point

    def test_structure_failure_stops_the_witness(self, contact_D, contact_frame, monkeypatch):
        broken = CStructureReport(False, "symbolic", 1, violations=[{"row": 0, "column": 0, "message": "X1 is missing"}])
        monkeypatch.setattr(witness_module, "check_C_structure", lambda reduction, schedule: broken)
        with pytest.raises(StructureViolationError) as excinfo:
            codim_witness(contact_D, contact_frame)
        assert excinfo.value.stage == "structure"

    def test_evaluation_failure_stops_the_witness(self, contact_D, contact_frame, monkeypatch):
        broken = CStructureReport(False, "evaluation", 1, violations=[{"row": None, "column": 0, "message": "X1 is missing"}])
        monkeypatch.setattr(witness_module, "check_C_structure_by_evaluation", lambda *args, **kwargs: broken)
        with pytest.raises(StructureViolationError) as excinfo:
            codim_witness(contact_D, contact_frame, symbolic_limit=0)
        assert excinfo.value.stage == "structure"

    def test_evaluation_mode_checks_regularity(self, contact_D, contact_frame):
        witness = codim_witness(contact_D, contact_frame, symbolic_limit=0)
        assert witness.mode == "evaluation"
        assert witness.structure[0].valid
        assert witness.found and witness.regular
        assert witness.regular_by == "exact-rank"

    def test_evaluation_mode_reports_a_failed_rank(self, contact_D, contact_frame, monkeypatch):
        failed = RegularityVerdict(False, 1, 2, 3, (3, 6), "rank")
        monkeypatch.setattr(witness_module, "is_W_regular", lambda *args, **kwargs: failed)
        witness = codim_witness(contact_D, contact_frame, symbolic_limit=0)
        assert witness.found
        assert not witness.regular

    @pytest.mark.slow
    def test_engel(self, engel_D, engel_frame):
        witness = codim_witness(engel_D, engel_frame)
        assert witness.structure[0].size == 3
        assert witness.found

    @pytest.mark.slow
    def test_toy_evaluation(self, toy_D):
        frame = adapted_frame(toy_D)
        witness = codim_witness(toy_D, frame)
        assert witness.mode == "evaluation"
        assert witness.structure[0].size == 8
        assert witness.found and witness.regular
        assert witness.regular_by == "exact-rank"
        schedule = build_schedule(frame.growth)
        jet = fiber_point(toy_D, frame.tau[(1, 1)], schedule.q_final, schedule.tau, witness.point, frame)
        B = build_B(toy_D, frame, level_schedule(schedule, 1), jet)
        assert B.size == 192


class TestInvariants:
    def test_deterministic(self):
        assert build_schedule(TOY, 2) == build_schedule(TOY, 2)

    @pytest.mark.parametrize("gv", [CONTACT, ENGEL, TOY])
    def test_width_sum(self, gv):
        schedule = build_schedule(gv)
        assert schedule.width_sum() == schedule.growth.corank * (schedule.q_final + 2)

    def test_det_B_matches_det_C(self, contact_D, contact_frame):
        schedule = build_schedule(CONTACT)
        tau = TauAssignment({1: TauLabel.tau(1, 1)})
        jet = symbolic_fiber(contact_D, [1, 0, 0], 1, tau, contact_frame)
        B = build_B(contact_D, contact_frame, schedule, jet)
        reduction = reduce_to_C(B)
        assert determinant(B.matrix) == reduction.sign * determinant(reduction.C)

    def test_frame_extension_keeps_rank(self, contact_D, contact_frame):
        schedule = build_schedule(CONTACT)
        jet = fiber_point(contact_D, [1, 0, 0], 1, schedule.tau, {1: 2}, contact_frame)
        A1, prescribed = build_A1(contact_D, contact_frame, schedule, jet)
        A = build_A(adapted_distribution(contact_D, contact_frame), jet, 1).matrix
        assert exact_rank(A1) == exact_rank(A) == 3
        assert len(prescribed) == schedule.width_sum()

    @pytest.mark.parametrize("seed", range(12))
    def test_random_growth_gives_square_levels(self, seed):
        gv = random_growth(seed)
        schedule = build_schedule(gv)
        assert schedule.width_sum() == gv.corank * (schedule.q_final + 2)
        for level in schedule.levels():
            assert level["width_sum"] == level["size"]
        assert len(schedule.hat_blocks()) == len(schedule.variables())
