"""
Plain-text rendering of reports for --format text.
"""

import logging
from typing import Any, Callable, Dict, List

from .report import Report

logger = logging.getLogger(__name__)

RULE = "=" * 60


def _flag_lines(result: Dict[str, Any]) -> List[str]:
    lines = [f"📐 Type m = {result['growth_string']} (step {result['step']})"]
    if result["bracket_generating"]:
        lines.append("✅ Bracket-generating at the base point")
    else:
        lines.append(f"⚠️ Not bracket-generating within max_step = {result['max_step']}")
    if result.get("capped_levels"):
        lines.append(f"⚠️ Bracket cap reached at levels {result['capped_levels']}; the type may be understated")
    return lines


def _wcheck_lines(result: Dict[str, Any]) -> List[str]:
    verdict = result["verdict"]
    rows, cols = verdict["shape"]
    lines = [f"📐 A is {rows}x{cols} at q = {verdict['q']}, rank {verdict['rank']} of {verdict['expected_rank']}"]
    if verdict["regular"]:
        lines.append("✅ W-regular")
    else:
        lines.append(f"❌ Not W-regular ({verdict['reason']})")
    if not verdict["exact"]:
        lines.append(f"⚠️ Probabilistic rank, failure probability <= {verdict['failure_bound']:.3g}")
    if result.get("dlambda_regular") is not None:
        lines.append(f"   d lambda-regular: {result['dlambda_regular']}")
    return lines


def _invert_lines(result: Dict[str, Any]) -> List[str]:
    inversion = result["inversion"]
    lines = [
        f"🧮 Pivot columns {inversion['pivots']}, pivot minor {inversion['pivot_minor']}",
        f"📏 Working interval ({inversion['working_interval']['lower']}, {inversion['working_interval']['upper']})",
    ]
    lines.extend(f"   S^{m} = {rows}" for m, rows in enumerate(result.get("S_entries", [])))
    residuals = result["residuals"]
    mark = "✅" if residuals["exact_zero"] else "❌"
    lines.append(f"{mark} L o M - Id on monomials through degree {residuals['degree']}: exact zero = {residuals['exact_zero']}")
    if residuals.get("numeric_max") is not None:
        lines.append(f"   float cross-check max residual {residuals['numeric_max']:.3g}")
    return lines


def _schedule_lines(result: Dict[str, Any]) -> List[str]:
    schedule = result["schedule"]
    lines = [f"🗂️ q(m, K) = {schedule['q_values']} for m = {tuple(schedule['growth'])}"]
    for level in schedule["levels"]:
        lines.append(f"   B_{level['k']}: q = {level['q']}, width sum {level['width_sum']} = p(q+2) = {level['size']}")
    lines.extend(f"   {line}" for line in schedule["labels"])
    lines.append("τ assignments:")
    lines.extend(f"   {line}" for line in result["tau_table"])
    return lines


def _certify_lines(result: Dict[str, Any]) -> List[str]:
    witness = result["witness"]
    lines = _schedule_lines(result)
    lines.append(f"🔎 Witness ({witness['mode']}) after {witness['attempts']} attempts at {witness['point']}")
    for i, value in enumerate(witness["values"], start=1):
        fresh = witness["fresh"][i - 1] if i - 1 < len(witness["fresh"]) else None
        lines.append(f"   P_{i} = {value} (fresh variable: {fresh})")
    for i, structure in enumerate(witness["structure"], start=1):
        mark = "✅" if structure["valid"] else "❌"
        lines.append(f"{mark} C_{i} is {structure['size']}x{structure['size']}, det C-tilde = {structure['det_ctilde']}")
    mark = "✅" if witness["regular"] else "❌"
    lines.append(f"{mark} Regular at the witness ({witness['regular_by']})")
    return lines


RENDERERS: Dict[str, Callable[[Dict[str, Any]], List[str]]] = {
    "flag": _flag_lines,
    "wcheck": _wcheck_lines,
    "invert": _invert_lines,
    "schedule": _schedule_lines,
    "certify": _certify_lines,
}


def render_text(report: Report) -> str:
    data = report.finish().to_dict()
    lines = [RULE, f"📊 hjet {data['command']['name']}", RULE]
    error = data["error"]
    if error is not None:
        where = f" at stage {error['stage']}" if error["stage"] else ""
        lines.append(f"❌ {error['type']}{where}: {error['message']}")
    else:
        lines.extend(RENDERERS[report.command](data["result"]))
    for note in data["errata"]:
        lines.append(f"📝 {note['id']}: {note['note']}")
    lines.append(f"exit code {data['exit_code']}")
    return "\n".join(lines) + "\n"
