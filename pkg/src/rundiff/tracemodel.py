"""Execution-trace data model and its canonical wire format.

The wire format is a single UTF-8 JSON document: a top-level object with a
"metadata" object and a "breakpoint" array; each breakpoint element is one
program state captured at a breakpoint hit. Runtime values carry exactly the
keys kind/name/type/value/fields/arrayElements, with null for absent, and
nest up to the capture depth declared in the metadata. Serialization is
canonical (fixed key order, 2-space indent, LF) so equal traces produce
identical bytes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import DepthViolation, MalformedTrace, NotPrimitive

VALUE_KINDS = ("LOCAL_VARIABLE", "FIELD", "ARRAY_ELEMENT", "RETURN")
RETURN_NAME = "<return>"


class _Absent:
    """Sentinel for a value payload that was never captured (depth cut)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ABSENT"


ABSENT = _Absent()

Primitive = int | float | bool | str | None


@dataclass(frozen=True)
class RuntimeValue:
    """One captured variable, field, array element, or return value.

    Exactly one of these holds: a primitive payload in ``value``, nested
    ``fields``, nested ``array_elements``, or none of the three (the node was
    cut off by the capture depth).
    """

    kind: str
    name: str
    type_name: str | None = None
    value: object = ABSENT
    fields: tuple["RuntimeValue", ...] | None = None
    array_elements: tuple["RuntimeValue", ...] | None = None

    @property
    def is_primitive(self) -> bool:
        return self.value is not ABSENT

    @property
    def is_truncated(self) -> bool:
        return self.value is ABSENT and self.fields is None and self.array_elements is None

    def children(self) -> tuple["RuntimeValue", ...]:
        return (self.fields or ()) + (self.array_elements or ())


@dataclass(frozen=True)
class StackFrameContext:
    position_from_top: int
    location: str
    stack_trace: tuple[str, ...]
    runtime_values: tuple[RuntimeValue, ...]


@dataclass(frozen=True)
class ProgramState:
    """One breakpoint hit: where it happened plus everything visible there."""

    file: str
    line_number: int
    stack_frame_contexts: tuple[StackFrameContext, ...]


@dataclass(frozen=True)
class TraceMetadata:
    version: str | None = None  # "original" | "patched"
    test_id: str | None = None
    depth: int | None = None
    collector: str | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExecutionTrace:
    """Program states in execution order, plus the capture conditions."""

    states: tuple[ProgramState, ...]
    metadata: TraceMetadata = field(default_factory=TraceMetadata)
    warnings: int = field(default=0, compare=False)


def canonical_value_string(v: RuntimeValue) -> str:
    """Deterministic rendering of a primitive leaf's payload."""
    if not v.is_primitive:
        raise NotPrimitive(f"{v.kind} {v.name!r} has no primitive payload")
    return _payload_string(v.value)


def _payload_string(payload: object) -> str:
    if payload is None:
        return "null"
    if isinstance(payload, bool):
        return "true" if payload else "false"
    if isinstance(payload, int):
        return str(payload)
    if isinstance(payload, float):
        if payload != payload:
            return "NaN"
        if payload == float("inf"):
            return "Infinity"
        if payload == float("-inf"):
            return "-Infinity"
        return repr(payload)
    if isinstance(payload, str):
        return json.dumps(payload, ensure_ascii=False)
    raise NotPrimitive(f"unsupported payload type {type(payload).__name__}")


def value_nesting_depth(v: RuntimeValue) -> int:
    """Number of field/array edges on the longest chain below v."""
    children = v.children()
    if not children:
        return 0
    return 1 + max(value_nesting_depth(child) for child in children)


# ---------------------------------------------------------------------------
# Canonical serialization


def runtime_value_to_obj(v: RuntimeValue) -> dict:
    return {
        "kind": v.kind,
        "name": v.name,
        "type": v.type_name,
        "value": None if v.value is ABSENT else v.value,
        "fields": None if v.fields is None else [runtime_value_to_obj(f) for f in v.fields],
        "arrayElements": None
        if v.array_elements is None
        else [runtime_value_to_obj(e) for e in v.array_elements],
    }


def program_state_to_obj(state: ProgramState, line_override: int | None = None) -> dict:
    return {
        "file": state.file,
        "lineNumber": state.line_number if line_override is None else line_override,
        "stackFrameContexts": [
            {
                "positionFromTopInStackTrace": frame.position_from_top,
                "location": frame.location,
                "stackTrace": list(frame.stack_trace),
                "runtimeValueCollection": [runtime_value_to_obj(v) for v in frame.runtime_values],
            }
            for frame in state.stack_frame_contexts
        ],
    }


def trace_to_obj(trace: ExecutionTrace) -> dict:
    meta = trace.metadata
    metadata_obj: dict = {
        "version": meta.version,
        "testId": meta.test_id,
        "depth": meta.depth,
        "collector": meta.collector,
    }
    for key in sorted(meta.extra):
        metadata_obj[key] = meta.extra[key]
    return {
        "metadata": metadata_obj,
        "breakpoint": [program_state_to_obj(s) for s in trace.states],
    }


def canonical_json(obj: object) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def serialize_trace(trace: ExecutionTrace) -> bytes:
    """Canonical byte form; parse_trace(serialize_trace(t)) equals t."""
    return canonical_json(trace_to_obj(trace)).encode("utf-8")


# ---------------------------------------------------------------------------
# Parsing / validation

_METADATA_KEYS = ("version", "testId", "depth", "collector")
_STATE_KEYS = frozenset(("file", "lineNumber", "stackFrameContexts"))
_FRAME_KEYS = frozenset(
    ("positionFromTopInStackTrace", "location", "stackTrace", "runtimeValueCollection")
)
_VALUE_KEYS = frozenset(("kind", "name", "type", "value", "fields", "arrayElements"))

_LOCATION_RE = re.compile(r"^(?P<qual>.+):(?P<line>\d+)$")
_STACK_ENTRY_RE = re.compile(r"^(?P<frame>.+):(?P<line>\d+),\s*(?P<qual>.+)$")


class _Warnings:
    def __init__(self):
        self.count = 0


def _require(condition: bool, position: str, reason: str) -> None:
    if not condition:
        raise MalformedTrace(position, reason)


def _parse_value(obj: object, position: str, warnings: _Warnings) -> RuntimeValue:
    _require(isinstance(obj, dict), position, "runtime value must be an object")
    assert isinstance(obj, dict)
    warnings.count += sum(1 for key in obj if key not in _VALUE_KEYS)

    kind = obj.get("kind")
    _require(kind in VALUE_KINDS, position, f"unknown kind {kind!r}")
    name = obj.get("name")
    _require(isinstance(name, str) and name != "", position, "name must be a nonempty string")
    type_name = obj.get("type")
    _require(
        type_name is None or isinstance(type_name, str), position, "type must be a string or null"
    )

    raw_value = obj.get("value")
    raw_fields = obj.get("fields")
    raw_elements = obj.get("arrayElements")
    present = sum(x is not None for x in (raw_value, raw_fields, raw_elements))
    _require(
        present <= 1, position, "value, fields and arrayElements are mutually exclusive"
    )

    value: object = ABSENT
    fields = None
    elements = None
    if raw_value is not None:
        _require(
            isinstance(raw_value, (int, float, bool, str)),
            position,
            f"value must be a primitive, got {type(raw_value).__name__}",
        )
        value = raw_value
    if raw_fields is not None:
        _require(isinstance(raw_fields, list), position, "fields must be an array or null")
        fields = tuple(
            _parse_value(child, f"{position}.fields[{i}]", warnings)
            for i, child in enumerate(raw_fields)
        )
    if raw_elements is not None:
        _require(isinstance(raw_elements, list), position, "arrayElements must be an array or null")
        elements = tuple(
            _parse_value(child, f"{position}.arrayElements[{i}]", warnings)
            for i, child in enumerate(raw_elements)
        )
    return RuntimeValue(
        kind=kind, name=name, type_name=type_name, value=value, fields=fields,
        array_elements=elements,
    )


def _check_frame_consistency(frame: StackFrameContext, position: str) -> None:
    loc = _LOCATION_RE.match(frame.location)
    top = _STACK_ENTRY_RE.match(frame.stack_trace[0])
    if loc is None or top is None:
        return  # free-form strings: structural validation only
    _require(
        loc.group("qual") == top.group("qual") and loc.group("line") == top.group("line"),
        position,
        f"location {frame.location!r} does not correspond to first stack entry "
        f"{frame.stack_trace[0]!r}",
    )


def _parse_frame(obj: object, position: str, warnings: _Warnings) -> StackFrameContext:
    _require(isinstance(obj, dict), position, "stack frame context must be an object")
    assert isinstance(obj, dict)
    warnings.count += sum(1 for key in obj if key not in _FRAME_KEYS)

    pos = obj.get("positionFromTopInStackTrace")
    _require(
        isinstance(pos, int) and not isinstance(pos, bool) and pos >= 1,
        position,
        "positionFromTopInStackTrace must be an integer >= 1",
    )
    location = obj.get("location")
    _require(isinstance(location, str), position, "location must be a string")
    stack = obj.get("stackTrace")
    _require(
        isinstance(stack, list) and len(stack) > 0 and all(isinstance(s, str) for s in stack),
        position,
        "stackTrace must be a nonempty array of strings",
    )
    raw_values = obj.get("runtimeValueCollection")
    _require(isinstance(raw_values, list), position, "runtimeValueCollection must be an array")
    values = tuple(
        _parse_value(v, f"{position}.runtimeValueCollection[{i}]", warnings)
        for i, v in enumerate(raw_values)
    )
    frame = StackFrameContext(
        position_from_top=pos, location=location, stack_trace=tuple(stack), runtime_values=values
    )
    _check_frame_consistency(frame, position)
    return frame


def _parse_state(obj: object, position: str, warnings: _Warnings) -> ProgramState:
    _require(isinstance(obj, dict), position, "breakpoint element must be an object")
    assert isinstance(obj, dict)
    warnings.count += sum(1 for key in obj if key not in _STATE_KEYS)

    file = obj.get("file")
    _require(isinstance(file, str) and file != "", position, "file must be a nonempty string")
    line = obj.get("lineNumber")
    _require(
        isinstance(line, int) and not isinstance(line, bool) and line >= 1,
        position,
        "lineNumber must be an integer >= 1",
    )
    raw_frames = obj.get("stackFrameContexts")
    _require(
        isinstance(raw_frames, list) and len(raw_frames) > 0,
        position,
        "stackFrameContexts must be a nonempty array",
    )
    frames = tuple(
        _parse_frame(f, f"{position}.stackFrameContexts[{i}]", warnings)
        for i, f in enumerate(raw_frames)
    )
    return ProgramState(file=file, line_number=line, stack_frame_contexts=frames)


def _parse_metadata(obj: object, warnings: _Warnings) -> TraceMetadata:
    if obj is None:
        return TraceMetadata()
    _require(isinstance(obj, dict), "metadata", "metadata must be an object")
    assert isinstance(obj, dict)
    version = obj.get("version")
    _require(
        version is None or version in ("original", "patched"),
        "metadata.version",
        f"version must be 'original' or 'patched', got {version!r}",
    )
    test_id = obj.get("testId")
    _require(
        test_id is None or isinstance(test_id, str), "metadata.testId", "testId must be a string"
    )
    depth = obj.get("depth")
    _require(
        depth is None or (isinstance(depth, int) and not isinstance(depth, bool) and depth >= 0),
        "metadata.depth",
        "depth must be an integer >= 0",
    )
    collector = obj.get("collector")
    _require(
        collector is None or isinstance(collector, str),
        "metadata.collector",
        "collector must be a string",
    )
    extra = {k: v for k, v in obj.items() if k not in _METADATA_KEYS}
    return TraceMetadata(
        version=version, test_id=test_id, depth=depth, collector=collector, extra=extra
    )


def parse_trace(data: bytes | str) -> ExecutionTrace:
    """Parse and structurally validate a trace document.

    Unknown keys are ignored but counted in the result's ``warnings``.
    Raises MalformedTrace on schema violations and DepthViolation when value
    nesting exceeds the depth declared in the metadata.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedTrace("<document>", f"not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedTrace(f"offset {exc.pos}", exc.msg) from exc

    _require(isinstance(doc, dict), "<document>", "top level must be an object")
    warnings = _Warnings()
    warnings.count += sum(1 for key in doc if key not in ("metadata", "breakpoint"))

    metadata = _parse_metadata(doc.get("metadata"), warnings)
    raw_states = doc.get("breakpoint")
    _require(isinstance(raw_states, list), "breakpoint", "breakpoint must be an array")
    states = tuple(
        _parse_state(s, f"breakpoint[{i}]", warnings) for i, s in enumerate(raw_states)
    )

    if metadata.depth is not None:
        for i, state in enumerate(states):
            for j, frame in enumerate(state.stack_frame_contexts):
                for k, value in enumerate(frame.runtime_values):
                    depth = value_nesting_depth(value)
                    if depth > metadata.depth:
                        raise DepthViolation(
                            f"breakpoint[{i}].stackFrameContexts[{j}].runtimeValueCollection[{k}]",
                            f"nesting depth {depth} exceeds declared depth {metadata.depth}",
                        )

    return ExecutionTrace(states=states, metadata=metadata, warnings=warnings.count)
