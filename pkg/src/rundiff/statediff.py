"""Runtime state differencing between two execution traces.

Extracts state values (line, access path, primitive value) from each trace,
keeps only those whose root variable is read on their line, normalizes
patched-version lines to original coordinates through the matched lines, and
computes the values and whole program states unique to each side. Uniqueness
of program states is found hash-first for speed, then confirmed structurally
so hash collisions can never change the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .diffcore import MatchedLines, SourceFile
from .errors import UnmappedLine
from .lexing import (
    ScopeStrategy,
    keywords_for,
    next_code_char,
    scan_identifiers,
    strip_literals_and_comments,
)
from .tracemodel import (
    ExecutionTrace,
    ProgramState,
    RuntimeValue,
    canonical_json,
    canonical_value_string,
    program_state_to_obj,
)


@dataclass(frozen=True)
class StateValue:
    """One primitive leaf observed at a line: <line, access path, value>."""

    line: int
    path: str
    value: str


@dataclass(frozen=True)
class RelevantVarsIndex:
    """Per-line read-access sets for one source file."""

    by_line: dict

    @classmethod
    def scan(
        cls,
        src: SourceFile,
        lines: Iterable[int],
        strategy: ScopeStrategy = "brace",
        keywords: frozenset[str] | None = None,
    ) -> "RelevantVarsIndex":
        return cls({line: relevant_vars(src, line, strategy, keywords) for line in set(lines)})

    def lookup(self, line: int) -> frozenset[str]:
        return self.by_line.get(line, frozenset())


@dataclass(frozen=True)
class StateDiffResult:
    """Values and program states unique to each version, in execution order."""

    unique_original_values: tuple[StateValue, ...]
    unique_patched_values: tuple[StateValue, ...]
    unique_original_states: tuple[ProgramState, ...]
    unique_patched_states: tuple[ProgramState, ...]


_SIMPLE_ASSIGN_NEIGHBOURS = "=!<>+-*/%&|^:~"


def _simple_assignment_index(code: str) -> int:
    """Index of the first plain '=' (not ==, <=, +=, := ...), or -1."""
    for i, ch in enumerate(code):
        if ch != "=":
            continue
        if i > 0 and code[i - 1] in _SIMPLE_ASSIGN_NEIGHBOURS:
            continue
        if i + 1 < len(code) and code[i + 1] == "=":
            continue
        return i
    return -1


def relevant_vars(
    src: SourceFile,
    line: int,
    strategy: ScopeStrategy = "brace",
    keywords: frozenset[str] | None = None,
) -> frozenset[str]:
    """Identifiers read on a source line.

    Lexical approximation of read access: keywords are dropped, identifiers
    directly followed by "(" are call names (dropped), and the sole target of
    a simple assignment is a write, so its left-hand occurrence is dropped
    while right-hand occurrences still count. Compound-assignment targets are
    read-modify-write and kept.
    """
    if keywords is None:
        keywords = keywords_for(strategy)
    code = strip_literals_and_comments(src.line(line), strategy)

    skip_span: tuple[int, int] | None = None
    assign = _simple_assignment_index(code)
    if assign >= 0:
        lhs = code[:assign]
        if not any(ch in lhs for ch in ".[("):
            lhs_idents = [t for t in scan_identifiers(lhs) if t[0] not in keywords]
            if len(lhs_idents) == 1:
                _, start, end = lhs_idents[0]
                skip_span = (start, end)

    names: set[str] = set()
    for name, start, end in scan_identifiers(code):
        if skip_span is not None and (start, end) == skip_span:
            continue
        if name in keywords:
            continue
        if next_code_char(code, end) == "(":
            continue
        names.add(name)
    return frozenset(names)


def extract_svs(line: int, prefix: str, vd: RuntimeValue) -> list[StateValue]:
    """All state values reachable from one captured value.

    A primitive leaf yields the single tuple <line, prefix+name, value>; a
    non-primitive yields the recursive extraction over its fields and array
    elements with the path extended by its name and a dot. Depth-truncated
    nodes yield nothing.
    """
    if vd.is_primitive:
        return [StateValue(line, prefix + vd.name, canonical_value_string(vd))]
    out: list[StateValue] = []
    for child in vd.children():
        out.extend(extract_svs(line, prefix + vd.name + ".", child))
    return out


def get_state_values(
    src: SourceFile,
    states: Iterable[ProgramState],
    line_map: dict[int, int] | None = None,
    strategy: ScopeStrategy = "brace",
) -> list[StateValue]:
    """State values of a trace whose root variable is read on its line.

    For patched-version states pass ``line_map`` (patched line -> original
    line): read access is judged against the state's own line in ``src``, but
    emitted state values carry original coordinates. A patched state on a
    line missing from the map raises UnmappedLine.
    """
    states = list(states)
    index = RelevantVarsIndex.scan(src, (s.line_number for s in states), strategy)
    result: list[StateValue] = []
    for state in states:
        line = state.line_number
        readable = index.lookup(line)
        emitted_line = line
        if line_map is not None:
            if line not in line_map:
                raise UnmappedLine(line)
            emitted_line = line_map[line]
        for frame in state.stack_frame_contexts:
            for vd in frame.runtime_values:
                if vd.name in readable:
                    result.extend(extract_svs(emitted_line, "", vd))
    return result


def get_unique_states(left: list[StateValue], right: list[StateValue]) -> list[StateValue]:
    """Elements of left absent from right, order kept, first occurrence only."""
    right_set = set(right)
    seen: set[StateValue] = set()
    out: list[StateValue] = []
    for sv in left:
        if sv in right_set or sv in seen:
            continue
        seen.add(sv)
        out.append(sv)
    return out


FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a over a byte string."""
    h = FNV64_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV64_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


HashFn = Callable[[bytes], int]


def _canonical_state_doc(state: ProgramState, line_override: int | None) -> bytes:
    return canonical_json(program_state_to_obj(state, line_override)).encode("utf-8")


def _normalized_docs(
    states: tuple[ProgramState, ...], line_map: dict[int, int] | None
) -> list[bytes]:
    docs = []
    for state in states:
        override = None
        if line_map is not None:
            if state.line_number not in line_map:
                raise UnmappedLine(state.line_number)
            override = line_map[state.line_number]
        docs.append(_canonical_state_doc(state, override))
    return docs


def _unique_side(
    states: tuple[ProgramState, ...],
    own_docs: list[bytes],
    other_docs: list[bytes],
    hash_fn: HashFn,
) -> list[ProgramState]:
    # Hash both sides, keep states whose hash is absent on the other side,
    # and confirm same-hash candidates structurally: a state counts as unique
    # exactly when its canonical serialization never occurs on the other side.
    buckets: dict[int, set[bytes]] = {}
    for doc in other_docs:
        buckets.setdefault(hash_fn(doc), set()).add(doc)
    unique: list[ProgramState] = []
    for state, doc in zip(states, own_docs):
        matches = buckets.get(hash_fn(doc))
        if matches is None or doc not in matches:
            unique.append(state)
    return unique


def diff_program_states(
    ot: ExecutionTrace,
    pt: ExecutionTrace,
    line_map: MatchedLines,
    hash_fn: HashFn = fnv1a64,
) -> tuple[list[ProgramState], list[ProgramState]]:
    """Program states occurring in only one trace.

    States are serialized with patched line numbers normalized to original
    coordinates, compared hash-first and confirmed structurally, and returned
    as the originating states in execution order.
    """
    to_original = line_map.to_original()
    original_docs = _normalized_docs(ot.states, None)
    patched_docs = _normalized_docs(pt.states, to_original)
    unique_original = _unique_side(ot.states, original_docs, patched_docs, hash_fn)
    unique_patched = _unique_side(pt.states, patched_docs, original_docs, hash_fn)
    return unique_original, unique_patched


def run_state_differencing(
    ot: ExecutionTrace,
    pt: ExecutionTrace,
    osrc: SourceFile,
    psrc: SourceFile,
    matched: MatchedLines,
    strategy: ScopeStrategy = "brace",
    hash_fn: HashFn = fnv1a64,
) -> StateDiffResult:
    """Full differencing pipeline over a pair of traces.

    The original trace was collected on ``osrc`` and the patched one on
    ``psrc``, both at the matched lines. Patched state values are normalized
    to original line coordinates before the set comparison.
    """
    to_original = matched.to_original()
    original_values = get_state_values(osrc, ot.states, None, strategy)
    patched_values = get_state_values(psrc, pt.states, to_original, strategy)
    unique_original_values = get_unique_states(original_values, patched_values)
    unique_patched_values = get_unique_states(patched_values, original_values)
    unique_original_states, unique_patched_states = diff_program_states(
        ot, pt, matched, hash_fn
    )
    return StateDiffResult(
        unique_original_values=tuple(unique_original_values),
        unique_patched_values=tuple(unique_patched_values),
        unique_original_states=tuple(unique_original_states),
        unique_patched_states=tuple(unique_patched_states),
    )
