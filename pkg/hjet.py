#!/usr/bin/env python3
"""
hjet command-line front end.

Commands:
    flag PROBLEM                  growth vector and bracket-generating verdict
    wcheck PROBLEM [--q --alpha]  W-regularity of the problem's jet
    invert PROBLEM [--q]          right inverse of the linearized operator
    schedule --growth M [--K]     sub-frame schedule and q(m, K)
    certify PROBLEM [--K]         schedule, C structure and codimension witness
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from exactalg import HJetError, InconsistencyError, PreconditionError
from geometry import GrowthVector, adapted_frame, flag_at_point
from invop import FRAC, invert, sample_grid, verify_right_inverse
from jets import tangency_solve
from regmat import is_dlambda_regular, is_in_W_alpha, is_W_regular, min_q
from reporting import Report, errata_for, render_text, to_json
from schedule import build_schedule, codim_witness, tau_table
from setup import Problem, ProblemSetup, ToolkitConfig

logger = logging.getLogger("hjet")


def _staged(error: HJetError, stage: str) -> HJetError:
    return error.with_stage(stage)


def _operator_rows(op: Any) -> List[List[List[str]]]:
    return [[[str(FRAC.to_sympy(x)) for x in row] for row in M.tolist()] for M in op.coefficients]


class HJetToolkit:
    """One method per command; each returns a Report"""

    def __init__(self, config: Optional[ToolkitConfig] = None):
        self.config = config or ToolkitConfig.from_env()
        self.problem_setup = ProblemSetup()

    def load(self, path: str) -> Problem:
        problem, setup_info = self.problem_setup.initialize_problem(path)
        if not setup_info["success"]:
            raise setup_info["exception"]
        return problem

    def _report(self, command: str, arguments: Dict[str, Any]) -> Report:
        return Report(command, arguments, seed=self.config.seed)

    def cmd_flag(self, problem: Problem) -> Report:
        report = self._report("flag", {"problem": problem.name, "max_step": self.config.max_step})
        try:
            flag = flag_at_point(problem.distribution, self.config.max_step)
        except HJetError as e:
            return report.fail(_staged(e, "flag"))
        report.result = {
            "distribution": problem.name,
            "N": problem.N,
            "p": problem.p,
            "growth": list(flag.growth.m),
            "growth_string": str(flag.growth),
            "compressed": list(flag.growth.compressed().m),
            "step": flag.growth.step,
            "jumps": list(flag.growth.jumps),
            "bracket_generating": flag.bracket_generating,
            "max_step": flag.max_step,
            "capped_levels": list(flag.capped_levels),
        }
        if problem.growth is not None and problem.growth.compressed() != flag.growth.compressed():
            logger.warning(f"declared growth {problem.growth} differs from the computed {flag.growth}")
            report.result["declared_growth"] = list(problem.growth.m)
        return report

    def _jet(self, problem: Problem, order: int):
        D = problem.distribution
        if problem.curve is not None:
            return problem.curve.jet(problem.t0, order), "curve"
        if problem.first_jet is not None:
            return tangency_solve(D, problem.first_jet, order - 1, t0=problem.t0), "first_jet"
        raise PreconditionError("problem has neither a curve nor a first jet", stage="parse")

    def cmd_wcheck(self, problem: Problem, q: Optional[int] = None, alpha: Optional[int] = None) -> Report:
        D = problem.distribution
        q = min_q(D.n, D.p) if q is None else q
        report = self._report("wcheck", {"problem": problem.name, "q": q, "alpha": alpha})
        try:
            order = (alpha if alpha is not None else q) + 1
            jet, source = self._jet(problem, order)
            if alpha is not None:
                verdict = is_in_W_alpha(D, jet, alpha, q, self.config.trials, self.config.bound)
            else:
                verdict = is_W_regular(D, jet, q, self.config.trials, self.config.bound)
        except HJetError as e:
            return report.fail(_staged(e, "regularity"))
        report.verdict = verdict.regular
        report.result = {
            "verdict": verdict.to_dict(),
            "jet_source": source,
            "jet_order": jet.order,
            "dlambda_regular": is_dlambda_regular(D, jet) if D.p else None,
        }
        return report

    def cmd_invert(self, problem: Problem, q: Optional[int] = None, degree: int = 3) -> Report:
        D = problem.distribution
        q = min_q(D.n, D.p) if q is None else q
        report = self._report("invert", {"problem": problem.name, "q": q, "degree": degree})
        try:
            if problem.curve is None:
                raise PreconditionError("inversion needs a curve in the problem file", stage="parse")
            result = invert(D, problem.curve, problem.t0, q)
            residuals = verify_right_inverse(result.L, result.M, degree, sample_grid(result.interval, problem.t0))
        except HJetError as e:
            return report.fail(_staged(e, "inversion"))
        report.result = {
            "inversion": result.to_dict(),
            "S_entries": _operator_rows(result.S),
            "M_entries": _operator_rows(result.M),
            "residuals": residuals.to_dict(),
        }
        if not residuals.exact_zero:
            return report.fail(InconsistencyError("L o M differs from the identity on test monomials", stage="inversion"))
        return report

    def cmd_schedule(self, growth: str, K: int = 1, q0: Optional[int] = None) -> Report:
        report = self._report("schedule", {"growth": growth, "K": K, "q0": q0})
        try:
            gv = GrowthVector.parse(growth)
            schedule = build_schedule(gv, K, q0)
        except HJetError as e:
            return report.fail(_staged(e, "schedule"))
        report.errata = errata_for("schedule", schedule.growth.m)
        report.result = {"schedule": schedule.to_dict(), "tau_table": tau_table(schedule)}
        return report

    def cmd_certify(self, problem: Problem, K: int = 1) -> Report:
        D = problem.distribution
        config = self.config
        report = self._report("certify", {"problem": problem.name, "K": K})
        stage = "flag"
        try:
            flag = flag_at_point(D, config.max_step)
            if not flag.bracket_generating:
                raise PreconditionError(f"{problem.name} is not bracket-generating within max_step = {flag.max_step}")
            stage = "frame"
            frame = adapted_frame(D, problem.growth, flag)
            stage = "schedule"
            schedule = build_schedule(frame.growth, K)
            report.errata = errata_for("certify", schedule.growth.m)
            stage = "witness"
            witness = codim_witness(
                D, frame, problem.first_jet, K, config.seed, config.witness_attempts,
                config.symbolic_limit, config.modulus, config.trials, schedule,
            )
        except HJetError as e:
            return report.fail(_staged(e, stage))
        report.result = {
            "growth": list(frame.growth.m),
            "capped_levels": list(flag.capped_levels),
            "frame": {
                "labels": [f"{s},{j}" for s, j in frame.labels],
                "tau": {f"{s},{j}": [str(x) for x in frame.tau[(s, j)]] for s, j in frame.labels},
                "eta": {f"{s},{j}": [str(x) for x in frame.eta[(s, j)]] for s, j in frame.labels},
                "zeta": {f"{s},{j}": [str(x) for x in frame.zeta[(s, j)]] for s, j in frame.labels},
            },
            "schedule": schedule.to_dict(),
            "tau_table": tau_table(schedule),
            "witness": witness.to_dict(),
        }
        if not all(witness.fresh):
            return report.fail(InconsistencyError("a witness polynomial has no fresh indeterminate", stage="witness"))
        if not witness.regular:
            return report.fail(InconsistencyError("jet at the witness point is not W-regular", stage="regularity"))
        return report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (falls back to HJET_SEED, then 0)")
    common.add_argument("--max-step", dest="max_step", type=int, default=None)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--bound", type=int, default=None)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--log-level", dest="log_level", default=None,
                        choices=("DEBUG", "INFO", "WARNING", "ERROR"))

    parser = argparse.ArgumentParser(prog="hjet", description="Horizontal-curve jet toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("flag", parents=[common], help="growth vector at the base point")
    p.add_argument("problem")

    p = sub.add_parser("wcheck", parents=[common], help="W-regularity verdict")
    p.add_argument("problem")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--alpha", type=int, default=None)

    p = sub.add_parser("invert", parents=[common], help="right inverse of the linearization")
    p.add_argument("problem")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--degree", type=int, default=3)

    p = sub.add_parser("schedule", parents=[common], help="sub-frame schedule for a growth vector")
    p.add_argument("--growth", required=True)
    p.add_argument("--K", type=int, default=1)
    p.add_argument("--q0", type=int, default=None)

    p = sub.add_parser("certify", parents=[common], help="codimension witness")
    p.add_argument("problem")
    p.add_argument("--K", type=int, default=1)
    return parser


def run(args: argparse.Namespace, config: ToolkitConfig) -> Report:
    toolkit = HJetToolkit(config)
    if args.command == "schedule":
        return toolkit.cmd_schedule(args.growth, args.K, args.q0)
    try:
        problem = toolkit.load(args.problem)
    except HJetError as e:
        report = Report(args.command, {"problem": args.problem}, seed=config.seed)
        return report.fail(e)
    if args.command == "flag":
        return toolkit.cmd_flag(problem)
    if args.command == "wcheck":
        return toolkit.cmd_wcheck(problem, args.q, args.alpha)
    if args.command == "invert":
        return toolkit.cmd_invert(problem, args.q, args.degree)
    return toolkit.cmd_certify(problem, args.K)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = ToolkitConfig.from_args(args)
    except HJetError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code
    logging.basicConfig(
        level=getattr(logging, config.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        report = run(args, config)
    except Exception as e:
        logger.exception(f"{args.command} raised {type(e).__name__}")
        report = Report(args.command, {"argv": list(argv) if argv is not None else sys.argv[1:]}, seed=config.seed)
        report.fail(InconsistencyError(f"unexpected {type(e).__name__}: {e}", stage="internal"))
    text = render_text(report) if args.format == "text" else to_json(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        logger.info(f"report written to {args.out}")
    else:
        sys.stdout.write(text)
    if report.error is not None:
        logger.error(f"{args.command} failed: {report.error}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
