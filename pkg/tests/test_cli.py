import json

import pytest

from exactalg import ParseError, PreconditionError
from hjet import HJetToolkit, build_parser, main
from reporting import Report, errata_for, load_report, render_text, to_json
from setup import SEED_VARIABLE, ProblemSetup, ToolkitConfig, load_problem, parse_problem


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def problem(problems_dir, name):
    return str(problems_dir / f"{name}.json")


class TestProblemFiles:
    def test_contact_file(self, problems_dir):
        loaded = load_problem(problem(problems_dir, "contact"))
        assert loaded.name == "contact"
        assert (loaded.N, loaded.p) == (3, 1)
        assert loaded.growth.m == (0, 2, 3)

    def test_invalid_json_has_location(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "schema": "hjet-problem/1",\n  "dimension": \n}\n')
        with pytest.raises(ParseError) as info:
            load_problem(str(path))
        assert info.value.line == 4

    def test_schema_violation(self):
        with pytest.raises(ParseError):
            parse_problem({"schema": "hjet-problem/1", "dimension": 3})

    def test_bad_polynomial(self):
        data = {"schema": "hjet-problem/1", "dimension": 3, "coframe": [["-y2", "0", "1 +"]]}
        with pytest.raises(ParseError):
            parse_problem(data)

    def test_curve_must_pass_through_base_point(self):
        data = {
            "schema": "hjet-problem/1",
            "dimension": 3,
            "coframe": [["0", "0", "1"]],
            "base_point": ["1", "0", "0"],
            "curve": {"components": [["0", "1"], ["0"], ["0"]]},
        }
        with pytest.raises(PreconditionError):
            parse_problem(data)

    def test_setup_reports_failure(self, tmp_path):
        problem_setup = ProblemSetup()
        loaded, info = problem_setup.initialize_problem(str(tmp_path / "missing.json"))
        assert loaded is None
        assert not info["success"]
        assert info["exception"].stage == "parse"


class TestConfig:
    def test_seed_from_environment(self, monkeypatch):
        monkeypatch.setenv(SEED_VARIABLE, "42")
        assert ToolkitConfig.from_env().seed == 42

    def test_flag_wins_over_environment(self, monkeypatch):
        monkeypatch.setenv(SEED_VARIABLE, "42")
        args = build_parser().parse_args(["schedule", "--growth", "0,2,3", "--seed", "5"])
        assert ToolkitConfig.from_args(args).seed == 5

    def test_bad_seed(self, monkeypatch):
        monkeypatch.setenv(SEED_VARIABLE, "abc")
        assert main(["schedule", "--growth", "0,2,3"]) == 2


class TestReport:
    def test_status_and_exit_code(self):
        report = Report("wcheck", {})
        assert (report.status, report.exit_code) == ("ok", 0)
        report.verdict = False
        assert (report.status, report.exit_code) == ("verdict-false", 4)
        report.fail(PreconditionError("no"))
        assert (report.status, report.exit_code) == ("error", 3)

    def test_round_trip(self):
        report = Report("schedule", {"growth": "0,2,3"}, result={"q": 1})
        data = load_report(to_json(report))
        assert data["result"] == {"q": 1}
        assert data["schema"] == "hjet-report/1"

    def test_toy_errata(self):
        ids = {e["id"] for e in errata_for("schedule", (0, 10, 12, 14))}
        assert {"schedule-inner-loop", "toy-tau3-label", "toy-B-size"} <= ids
        assert errata_for("invert") == []

    def test_text_view(self):
        report = HJetToolkit(ToolkitConfig()).cmd_schedule("0,2,3,4")
        text = render_text(report)
        assert "exit code 0" in text


class TestCommands:
    def test_flag(self, problems_dir, capsys):
        code, out = run(["flag", problem(problems_dir, "engel")], capsys)
        assert code == 0
        data = load_report(out)
        assert data["result"]["growth"] == [0, 2, 3, 4]
        assert data["result"]["bracket_generating"] is True
        assert data["result"]["capped_levels"] == []

    def test_flag_not_generating_is_not_an_error(self, problems_dir, capsys):
        code, out = run(["flag", problem(problems_dir, "integrable")], capsys)
        assert code == 0
        assert json.loads(out)["result"]["bracket_generating"] is False

    def test_wcheck(self, problems_dir, capsys):
        code, out = run(["wcheck", problem(problems_dir, "contact")], capsys)
        assert code == 0
        assert json.loads(out)["result"]["verdict"]["regular"] is True

    def test_wcheck_verdict_false(self, problems_dir, capsys):
        code, out = run(["wcheck", problem(problems_dir, "integrable")], capsys)
        assert code == 4
        assert json.loads(out)["status"] == "verdict-false"

    def test_invert(self, problems_dir, capsys):
        code, out = run(["invert", problem(problems_dir, "contact")], capsys)
        assert code == 0
        result = json.loads(out)["result"]
        assert result["S_entries"] == [[["1", "0", "t"]]]
        assert result["residuals"]["exact_zero"] is True

    def test_invert_not_regular(self, problems_dir, capsys):
        code, out = run(["invert", problem(problems_dir, "integrable")], capsys)
        assert code == 4
        assert json.loads(out)["error"]["stage"] == "regularity"

    def test_schedule(self, capsys):
        code, out = run(["schedule", "--growth", "0,2,3,4"], capsys)
        assert code == 0
        result = json.loads(out)["result"]
        assert result["schedule"]["q_values"] == [6]
        assert result["schedule"]["width_sum"] == 16

    def test_schedule_bad_growth(self, capsys):
        code, out = run(["schedule", "--growth", "0,x"], capsys)
        assert code == 2
        assert json.loads(out)["status"] == "error"

    def test_certify(self, problems_dir, capsys):
        code, out = run(["certify", problem(problems_dir, "contact")], capsys)
        assert code == 0
        witness = json.loads(out)["result"]["witness"]
        assert witness["polynomials"] == ["X1"]
        assert witness["fresh"] == [True]

    def test_certify_not_generating(self, problems_dir, capsys):
        code, out = run(["certify", problem(problems_dir, "integrable")], capsys)
        assert code == 3
        assert json.loads(out)["error"]["stage"] == "flag"

    def test_unexpected_exception_exits_5(self, monkeypatch, capsys):
        def broken(self, growth, K=1, q0=None):
            raise ZeroDivisionError("division by zero")

        monkeypatch.setattr(HJetToolkit, "cmd_schedule", broken)
        code, out = run(["schedule", "--growth", "0,2,3"], capsys)
        assert code == 5
        data = load_report(out)
        assert data["status"] == "error"
        assert data["error"]["type"] == "InconsistencyError"
        assert data["error"]["stage"] == "internal"
        assert "ZeroDivisionError" in data["error"]["message"]

    def test_missing_problem(self, tmp_path, capsys):
        code, out = run(["flag", str(tmp_path / "nope.json")], capsys)
        assert code == 2
        assert json.loads(out)["error"]["stage"] == "parse"

    def test_out_file(self, problems_dir, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, out = run(["flag", problem(problems_dir, "contact"), "--out", str(target)], capsys)
        assert code == 0
        assert out == ""
        assert load_report(target.read_text())["command"]["name"] == "flag"

    def test_certify_is_reproducible(self, problems_dir):
        toolkit = HJetToolkit(ToolkitConfig(seed=11))
        loaded = load_problem(problem(problems_dir, "contact"))
        first = to_json(toolkit.cmd_certify(loaded), timing=False)
        second = to_json(toolkit.cmd_certify(loaded), timing=False)
        assert first == second
