"""Outcome classification and report rendering.

Produces the two user-facing artifacts of a comparison: a machine-readable
document with everything unique to either version, and a self-contained HTML
page showing the unified diff annotated with the first runtime value that
exists in only one version's execution.
"""

from __future__ import annotations

import enum
import html
from dataclasses import dataclass

from .diffcore import LineDiff, SourceFile
from .errors import AnchorMissing
from .statediff import StateDiffResult, StateValue
from .tracemodel import ExecutionTrace, canonical_json, program_state_to_obj, trace_to_obj


class Outcome(enum.Enum):
    AUGMENTED_DIFF = "AugmentedDiff"
    INVISIBLE_DIFF = "InvisibleDiff"
    NO_DIFF_DETECTED = "NoDiffDetected"
    MEMORY_FAILURE = "MemoryFailure"
    TIME_LIMIT = "TimeLimit"


_FAILURE_OUTCOMES = (Outcome.MEMORY_FAILURE, Outcome.TIME_LIMIT)


def classify(result: StateDiffResult, failure: Outcome | None = None) -> Outcome:
    """Classify a comparison: a failure signal dominates, then the result.

    AugmentedDiff when any unique relevant state value exists, InvisibleDiff
    when only whole program states are unique, NoDiffDetected otherwise.
    """
    if failure is not None:
        if failure not in _FAILURE_OUTCOMES:
            raise ValueError(f"failure signal must be a failure outcome, got {failure}")
        return failure
    if result.unique_original_values or result.unique_patched_values:
        return Outcome.AUGMENTED_DIFF
    if result.unique_original_states or result.unique_patched_states:
        return Outcome.INVISIBLE_DIFF
    return Outcome.NO_DIFF_DETECTED


def first_unique(result: StateDiffResult) -> tuple[StateValue | None, StateValue | None]:
    """The first unique relevant state value of each version, if any."""
    original = result.unique_original_values[0] if result.unique_original_values else None
    patched = result.unique_patched_values[0] if result.unique_patched_values else None
    return original, patched


@dataclass(frozen=True)
class AugmentedDiff:
    """A rendered diff with at most one runtime annotation per version."""

    unified_diff: str  # self-contained HTML document
    original_annotation: StateValue | None
    patched_annotation: StateValue | None
    test_id: str


@dataclass(frozen=True)
class _Row:
    kind: str  # "context" | "delete" | "insert"
    o: int | None
    p: int | None
    text: str


def _build_rows(original: SourceFile, patched: SourceFile, diff: LineDiff) -> list[_Row]:
    rows: list[_Row] = []
    prev_o = prev_p = 0
    for lo, lp in diff.unchanged_map:
        for d in range(prev_o + 1, lo):
            rows.append(_Row("delete", d, None, original.lines[d - 1]))
        for i in range(prev_p + 1, lp):
            rows.append(_Row("insert", None, i, patched.lines[i - 1]))
        rows.append(_Row("context", lo, lp, original.lines[lo - 1]))
        prev_o, prev_p = lo, lp
    for d in range(prev_o + 1, len(original.lines) + 1):
        rows.append(_Row("delete", d, None, original.lines[d - 1]))
    for i in range(prev_p + 1, len(patched.lines) + 1):
        rows.append(_Row("insert", None, i, patched.lines[i - 1]))
    return rows


def _hunks(included: list[int]) -> list[list[int]]:
    groups: list[list[int]] = []
    for idx in included:
        if groups and idx == groups[-1][-1] + 1:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return groups


_STYLE = """
body { font-family: -apple-system, 'Segoe UI', sans-serif; margin: 1.5em; color: #1f2328; }
h1 { font-size: 1.2em; }
p.meta { color: #57606a; }
p.banner { background: #fff8c5; border: 1px solid #d4a72c66; padding: .5em .8em; width: fit-content; }
table.diff { border-collapse: collapse; font-family: ui-monospace, 'SFMono-Regular', Menlo, monospace;
             font-size: 12px; width: 100%; border: 1px solid #d0d7de; }
td { padding: 0 .5em; vertical-align: top; }
td.lno { color: #6e7781; text-align: right; width: 3em; user-select: none; }
td.sign { width: 1em; user-select: none; }
td.code { white-space: pre-wrap; width: 100%; }
tr.hunk td { background: #ddf4ff; color: #57606a; padding: .2em .5em; }
tr.delete { background: #ffebe9; }
tr.delete td.lno, tr.delete td.sign { background: #ffd7d5; }
tr.insert { background: #dafbe1; }
tr.insert td.lno, tr.insert td.sign { background: #ccffd8; }
tr.callout td { padding: .35em .8em; font-family: -apple-system, 'Segoe UI', sans-serif; }
tr.callout.original td { background: #fff1e5; border: 1px solid #f6c6a6; }
tr.callout.patched td { background: #e7f0ff; border: 1px solid #a6c8f6; }
span.tag { font-weight: 600; margin-right: .6em; }
span.value { font-family: ui-monospace, Menlo, monospace; }
"""


def _callout_row(side: str, sv: StateValue) -> str:
    label = "only in the original run" if side == "original" else "only in the patched run"
    return (
        f'<tr class="callout {side}"><td colspan="2"></td><td colspan="2">'
        f'<span class="tag">{label}:</span>'
        f'<span class="value">{html.escape(sv.path)} = {html.escape(sv.value)}</span>'
        f"</td></tr>"
    )


def render_augmented_diff(
    original: SourceFile,
    patched: SourceFile,
    diff: LineDiff,
    firsts: tuple[StateValue | None, StateValue | None],
    test_id: str,
    context_lines: int = 3,
) -> str:
    """Self-contained HTML: unified diff plus one callout per version.

    Each first unique value is rendered directly beneath the row carrying its
    (original-coordinate) line; the hunk context is widened as needed so every
    annotation is visible.
    """
    rows = _build_rows(original, patched, diff)
    original_sv, patched_sv = firsts

    anchors: dict[int, list[str]] = {}
    for side, sv in (("original", original_sv), ("patched", patched_sv)):
        if sv is None:
            continue
        index = next((i for i, row in enumerate(rows) if row.o == sv.line), None)
        if index is None:
            raise AnchorMissing(
                f"annotation line {sv.line} is not a line of {original.path}"
            )
        anchors.setdefault(index, []).append(_callout_row(side, sv))

    interesting = [i for i, row in enumerate(rows) if row.kind != "context"]
    interesting.extend(anchors)
    included = sorted(
        {
            j
            for i in interesting
            for j in range(max(0, i - context_lines), min(len(rows), i + context_lines + 1))
        }
    )

    out: list[str] = []
    out.append("<!DOCTYPE html>")
    out.append('<html lang="en"><head><meta charset="utf-8">')
    out.append(f"<title>runtime diff: {html.escape(original.path)}</title>")
    out.append(f"<style>{_STYLE}</style></head><body>")
    out.append("<h1>Runtime-augmented diff</h1>")
    out.append(
        '<p class="meta">'
        f"{html.escape(original.path)} &rarr; {html.escape(patched.path)}"
        f" &middot; covering test: <code>{html.escape(test_id)}</code></p>"
    )
    if original_sv is None and patched_sv is None:
        out.append('<p class="banner">no runtime difference detected</p>')
    out.append('<table class="diff">')

    sign = {"context": "&nbsp;", "delete": "-", "insert": "+"}
    last_o = last_p = 0
    for group in _hunks(included):
        o_lines = [rows[i].o for i in group if rows[i].o is not None]
        p_lines = [rows[i].p for i in group if rows[i].p is not None]
        start_o = o_lines[0] if o_lines else last_o
        start_p = p_lines[0] if p_lines else last_p
        out.append(
            '<tr class="hunk"><td colspan="4">'
            f"@@ -{start_o},{len(o_lines)} +{start_p},{len(p_lines)} @@</td></tr>"
        )
        for i in group:
            row = rows[i]
            o_cell = "" if row.o is None else str(row.o)
            p_cell = "" if row.p is None else str(row.p)
            out.append(
                f'<tr class="{row.kind}"><td class="lno">{o_cell}</td>'
                f'<td class="lno">{p_cell}</td><td class="sign">{sign[row.kind]}</td>'
                f'<td class="code">{html.escape(row.text) or "&nbsp;"}</td></tr>'
            )
            out.extend(anchors.get(i, ()))
            if row.o is not None:
                last_o = row.o
            if row.p is not None:
                last_p = row.p
    out.append("</table></body></html>")
    return "\n".join(out) + "\n"


def build_augmented_diff(
    original: SourceFile,
    patched: SourceFile,
    diff: LineDiff,
    firsts: tuple[StateValue | None, StateValue | None],
    test_id: str,
    context_lines: int = 3,
) -> AugmentedDiff:
    document = render_augmented_diff(original, patched, diff, firsts, test_id, context_lines)
    return AugmentedDiff(
        unified_diff=document,
        original_annotation=firsts[0],
        patched_annotation=firsts[1],
        test_id=test_id,
    )


def _state_value_to_obj(sv: StateValue) -> dict:
    return {"line": sv.line, "path": sv.path, "value": sv.value}


def emit_textual_output(
    result: StateDiffResult,
    original_trace: ExecutionTrace,
    patched_trace: ExecutionTrace,
    outcome: Outcome | None = None,
) -> tuple[bytes, bytes]:
    """The two tool-facing documents.

    The first lists every unique program state and unique relevant state
    value for both versions (plus the outcome when given); the second holds
    both full traces. Both are canonical: equal inputs give identical bytes.
    """
    report: dict = {}
    if outcome is not None:
        report["outcome"] = outcome.value
    report["uniqueStateValues"] = {
        "original": [_state_value_to_obj(sv) for sv in result.unique_original_values],
        "patched": [_state_value_to_obj(sv) for sv in result.unique_patched_values],
    }
    report["uniqueProgramStates"] = {
        "original": [program_state_to_obj(s) for s in result.unique_original_states],
        "patched": [program_state_to_obj(s) for s in result.unique_patched_states],
    }
    traces = {
        "original": trace_to_obj(original_trace),
        "patched": trace_to_obj(patched_trace),
    }
    return (
        canonical_json(report).encode("utf-8"),
        canonical_json(traces).encode("utf-8"),
    )
