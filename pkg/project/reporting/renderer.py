from __future__ import annotations

"""
Plain-text renderer for classifier reports.

- render_template: Replace placeholders of form {KEY} with stringified values.
- render_indexed_line_block: Duplicate a line containing an [INDEX] placeholder once per item.
- render_report: Human-readable layout of a ReportDocument (the default CLI output).
"""

import re
from typing import Callable, Dict, List, Optional, Sequence

from project.reporting.documents import ReportDocument

SUCCESS_TEMPLATE = """\
{COMMAND}: {LABEL} (dimension {DIM})
  homomorphism residual: {RESIDUAL}
  isomorphism (input coordinates -> {TARGET_BASIS}):
    {ISO[INDEX]_ROW}
  tolerance: eps={EPS} rel={REL}"""

FAILURE_TEMPLATE = """\
{COMMAND}: not a division algebra (dimension {DIM})
  witness: {KIND}
  {WITNESS[INDEX]_LINE}
  residual: {RESIDUAL}
  tolerance: eps={EPS} rel={REL}"""

AXIOMS_TEMPLATE = """\
verify: {VERDICT} (dimension {DIM})
  unity: {UNITY}
  associative: {ASSOCIATIVE} (worst residual {WORST} at {TRIPLE}, threshold {THRESHOLD})
  tolerance: eps={EPS} rel={REL}"""

_PLACEHOLDER = re.compile(r"\{([A-Z0-9_\[\]]+)\}")


def render_template(template: str, context: Dict[str, object]) -> str:
    """
    Replace placeholders in the form {KEY} with the string value of context[KEY].
    Missing keys remain unchanged so a later pass can fill them.
    """
    if not context:
        return template

    def replace(match: re.Match) -> str:
        key = match.group(1)
        if key in context and context[key] is not None:
            return str(context[key])
        return match.group(0)

    return _PLACEHOLDER.sub(replace, template)


def render_indexed_line_block(
    template: str,
    match_placeholder: str,
    item_count: int,
    render_for_index: Callable[[int, str], str],
) -> str:
    """
    Duplicate the first line containing match_placeholder item_count times, each copy passed
    through render_for_index(index, line). Zero items removes the line; a missing placeholder
    leaves the template unchanged.
    """
    lines = template.splitlines()
    line_index = next((idx for idx, line in enumerate(lines) if match_placeholder in line), None)
    if line_index is None:
        return template
    row_template = lines[line_index]
    rows = [render_for_index(i, row_template) for i in range(max(item_count, 0))]
    return "\n".join(lines[:line_index] + rows + lines[line_index + 1:])


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, str):
        return value
    return f"{float(value):.6g}"


def _vector(values: Optional[Sequence[float]]) -> str:
    if values is None:
        return "-"
    return "(" + ", ".join(f"{float(v):.6g}" for v in values) + ")"


def _witness_lines(witness: Dict[str, object]) -> List[str]:
    kind = witness.get("kind")
    if kind == "ZeroDivisor":
        return [f"a = {_vector(witness['a'])}", f"b = {_vector(witness['b'])}"]
    if kind == "NonAssociative":
        i, j, k = witness.get("names") or [f"e{t}" for t in witness["triple"]]
        return [f"({i} {j}) {k} != {i} ({j} {k})"]
    if kind == "NoUnity":
        return ["no element is a two-sided identity"]
    lines = [str(witness.get("detail", ""))]
    pair = witness.get("pair")
    if pair:
        lines.extend(f"pair[{n}] = {_vector(v)}" for n, v in enumerate(pair))
    return lines


def render_report(report: ReportDocument) -> str:
    base = {
        "COMMAND": report.command,
        "DIM": report.dim,
        "EPS": _fmt(report.tolerance.get("eps")),
        "REL": _fmt(report.tolerance.get("rel")),
    }

    if report.command == "verify":
        axioms = report.axioms or {}
        triple = (report.witness or {}).get("names") or axioms.get("witness_triple")
        text = render_template(AXIOMS_TEMPLATE, {
            **base,
            "VERDICT": report.outcome,
            "UNITY": _vector(axioms.get("unity")) if axioms.get("has_unity") else "none",
            "ASSOCIATIVE": "yes" if axioms.get("associative") else "no",
            "WORST": _fmt(axioms.get("worst_assoc_residual")),
            "TRIPLE": "-" if triple is None else "(" + ", ".join(str(t) for t in triple) + ")",
            "THRESHOLD": _fmt(axioms.get("threshold")),
        })
        return text + "\n"

    if report.witness is None:
        iso = report.iso or []
        names = ("1", "i", "j", "k")[: len(iso)]
        text = render_template(SUCCESS_TEMPLATE, {
            **base,
            "LABEL": report.outcome,
            "RESIDUAL": _fmt(report.residual),
            "TARGET_BASIS": ", ".join(names),
        })
        text = render_indexed_line_block(
            text, "{ISO[INDEX]_ROW}", len(iso),
            lambda i, line: line.replace("{ISO[INDEX]_ROW}", f"{names[i]}: {_vector(iso[i])}"),
        )
        return text + "\n"

    lines = _witness_lines(report.witness)
    text = render_template(FAILURE_TEMPLATE, {
        **base,
        "KIND": report.witness.get("kind"),
        "RESIDUAL": _fmt(report.witness.get("residual")),
    })
    text = render_indexed_line_block(
        text, "{WITNESS[INDEX]_LINE}", len(lines),
        lambda i, line: line.replace("{WITNESS[INDEX]_LINE}", lines[i]),
    )
    return text + "\n"
