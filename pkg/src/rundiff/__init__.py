"""rundiff: compare two program versions at runtime and annotate their diff.

The engine takes an original and a patched version of a source file plus an
execution trace of a covering test on each version, finds the runtime values
unique to one version, and renders the source diff annotated with the first
such value per version.
"""

from .diffcore import (
    LineDiff,
    MatchedLines,
    Scope,
    SourceFile,
    detect_scopes,
    matched_lines,
    myers_diff,
)
from .errors import (
    AnchorMissing,
    DepthViolation,
    MalformedTrace,
    NotPrimitive,
    RunDiffError,
    UnbalancedScope,
    UnmappedLine,
)
from .report import (
    AugmentedDiff,
    Outcome,
    build_augmented_diff,
    classify,
    emit_textual_output,
    first_unique,
    render_augmented_diff,
)
from .statediff import (
    RelevantVarsIndex,
    StateDiffResult,
    StateValue,
    diff_program_states,
    extract_svs,
    fnv1a64,
    get_state_values,
    get_unique_states,
    relevant_vars,
    run_state_differencing,
)
from .tracemodel import (
    ABSENT,
    RETURN_NAME,
    VALUE_KINDS,
    ExecutionTrace,
    ProgramState,
    RuntimeValue,
    StackFrameContext,
    TraceMetadata,
    canonical_value_string,
    parse_trace,
    serialize_trace,
)

__version__ = "0.1.0"

__all__ = [
    "ABSENT",
    "AnchorMissing",
    "AugmentedDiff",
    "DepthViolation",
    "ExecutionTrace",
    "LineDiff",
    "MalformedTrace",
    "MatchedLines",
    "NotPrimitive",
    "Outcome",
    "ProgramState",
    "RETURN_NAME",
    "RelevantVarsIndex",
    "RunDiffError",
    "RuntimeValue",
    "Scope",
    "SourceFile",
    "StackFrameContext",
    "StateDiffResult",
    "StateValue",
    "TraceMetadata",
    "UnbalancedScope",
    "UnmappedLine",
    "VALUE_KINDS",
    "build_augmented_diff",
    "canonical_value_string",
    "classify",
    "detect_scopes",
    "diff_program_states",
    "emit_textual_output",
    "extract_svs",
    "first_unique",
    "fnv1a64",
    "get_state_values",
    "get_unique_states",
    "matched_lines",
    "myers_diff",
    "parse_trace",
    "relevant_vars",
    "render_augmented_diff",
    "run_state_differencing",
    "serialize_trace",
]
