"""Seeded random generators for traces and trace pairs.

The pair generator is the workhorse of the differencing properties: it builds
a synthetic source pair (the patched version is the original shifted down by
a few inserted lines), records as ground truth which variables each line
reads, and emits two correlated traces drawn from a shared pool of candidate
states so the two sides overlap, mutate, and diverge in interesting ways.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from rundiff.diffcore import MatchedLines, SourceFile
from rundiff.tracemodel import (
    ExecutionTrace,
    ProgramState,
    RuntimeValue,
    StackFrameContext,
    TraceMetadata,
)

VAR_POOL = ("alpha", "beta", "gamma", "delta", "omega")

_LEAF_PAYLOADS = (
    0, 1, -7, 23, 1_000_000,
    True, False,
    0.5, -2.25, 1.0,
    "", "abc", 'quo"te', "line\nbreak", "naïve",
)


def rand_leaf(rng: random.Random, name: str, kind: str) -> RuntimeValue:
    payload = rng.choice(_LEAF_PAYLOADS)
    return RuntimeValue(kind=kind, name=name, type_name=type(payload).__name__, value=payload)


def rand_value(rng: random.Random, name: str, kind: str, depth_budget: int) -> RuntimeValue:
    roll = rng.random()
    if depth_budget <= 0 or roll < 0.55:
        return rand_leaf(rng, name, kind)
    if roll < 0.68:
        return RuntimeValue(kind=kind, name=name, type_name="Obj")  # depth-truncated
    if roll < 0.9:
        fields = tuple(
            rand_value(rng, f"f{i}", "FIELD", depth_budget - 1)
            for i in range(rng.randint(1, 3))
        )
        return RuntimeValue(kind=kind, name=name, type_name="Obj", fields=fields)
    elements = tuple(
        rand_value(rng, str(i), "ARRAY_ELEMENT", depth_budget - 1)
        for i in range(rng.randint(0, 3))
    )
    return RuntimeValue(kind=kind, name=name, type_name="Arr", array_elements=elements)


def _state(file: str, line: int, values: tuple[RuntimeValue, ...]) -> ProgramState:
    frame = StackFrameContext(
        position_from_top=1,
        location=f"demo.App:{line}",
        stack_trace=(f"run:{line}, demo.App", "test_run:4, demo.AppTest"),
        runtime_values=values,
    )
    return ProgramState(file=file, line_number=line, stack_frame_contexts=(frame,))


def rand_state(rng: random.Random, line: int, max_depth: int, max_vars: int = 5) -> ProgramState:
    names = rng.sample(VAR_POOL, rng.randint(0, max_vars))
    values = tuple(
        rand_value(rng, name, "LOCAL_VARIABLE", rng.randint(0, max_depth))
        for name in sorted(names)
    )
    return _state("demo/App.java", line, values)


def rand_trace(rng: random.Random, version: str | None = None, max_states: int = 8) -> ExecutionTrace:
    depth = rng.randint(0, 3)
    states = tuple(
        rand_state(rng, rng.randint(1, 40), depth) for _ in range(rng.randint(0, max_states))
    )
    metadata = TraceMetadata(
        version=version,
        test_id=rng.choice((None, "AppTest::test_run")),
        depth=depth,
        collector=rng.choice((None, "gen")),
        extra={} if rng.random() < 0.7 else {"threads": "main-only", "cap": rng.randint(1, 9)},
    )
    return ExecutionTrace(states=states, metadata=metadata)


@dataclass
class GeneratedPair:
    """A synthetic comparison with generator-side ground truth."""

    original_src: SourceFile
    patched_src: SourceFile
    matched: MatchedLines
    reads_original: dict[int, frozenset[str]]
    reads_patched: dict[int, frozenset[str]]
    original_trace: ExecutionTrace
    patched_trace: ExecutionTrace


def _mutate_state(rng: random.Random, state: ProgramState, max_depth: int) -> ProgramState:
    frame = state.stack_frame_contexts[0]
    values = list(frame.runtime_values)
    if values and rng.random() < 0.8:
        idx = rng.randrange(len(values))
        values[idx] = rand_value(rng, values[idx].name, values[idx].kind, rng.randint(0, max_depth))
    else:
        name = rng.choice(VAR_POOL)
        values = [v for v in values if v.name != name]
        values.append(rand_value(rng, name, "LOCAL_VARIABLE", rng.randint(0, max_depth)))
        values.sort(key=lambda v: v.name)
    new_frame = StackFrameContext(
        position_from_top=frame.position_from_top,
        location=frame.location,
        stack_trace=frame.stack_trace,
        runtime_values=tuple(values),
    )
    return ProgramState(state.file, state.line_number, (new_frame,))


def _shift_state(state: ProgramState, shift: int) -> ProgramState:
    if shift == 0:
        return state
    line = state.line_number + shift
    frame = state.stack_frame_contexts[0]
    new_frame = StackFrameContext(
        position_from_top=frame.position_from_top,
        location=f"demo.App:{line}",
        stack_trace=(f"run:{line}, demo.App",) + frame.stack_trace[1:],
        runtime_values=frame.runtime_values,
    )
    return ProgramState(state.file, line, (new_frame,))


def rand_pair(rng: random.Random, max_states: int = 20, max_depth: int = 3) -> GeneratedPair:
    n_lines = rng.randint(3, 12)
    shift = rng.randint(0, 3)

    reads_original: dict[int, frozenset[str]] = {}
    reads_patched: dict[int, frozenset[str]] = {}
    body: list[str] = []
    for line in range(1, n_lines + 1):
        subset = frozenset(rng.sample(VAR_POOL, rng.randint(0, len(VAR_POOL))))
        body.append(f"use({', '.join(sorted(subset))});")
        reads_original[line] = subset
        reads_patched[line + shift] = subset

    original_src = SourceFile("demo/App.java", tuple(body))
    patched_src = SourceFile("demo/App.java", tuple(["pad();"] * shift + body))
    matched = MatchedLines(tuple((line, line + shift) for line in range(1, n_lines + 1)))

    # Correlated traces: both sides draw from a shared pool of candidate
    # states, and the patched side mutates some picks so values diverge.
    pool = [
        rand_state(rng, rng.randint(1, n_lines), max_depth)
        for _ in range(rng.randint(1, 8))
    ]
    original_states = tuple(
        rng.choice(pool) for _ in range(rng.randint(0, max_states))
    )
    patched_states = []
    for _ in range(rng.randint(0, max_states)):
        state = rng.choice(pool)
        if rng.random() < 0.45:
            state = _mutate_state(rng, state, max_depth)
        patched_states.append(_shift_state(state, shift))

    depth_used = max_depth
    original_trace = ExecutionTrace(
        states=original_states,
        metadata=TraceMetadata(version="original", test_id="AppTest::test_run", depth=depth_used),
    )
    patched_trace = ExecutionTrace(
        states=tuple(patched_states),
        metadata=TraceMetadata(version="patched", test_id="AppTest::test_run", depth=depth_used),
    )
    return GeneratedPair(
        original_src=original_src,
        patched_src=patched_src,
        matched=matched,
        reads_original=reads_original,
        reads_patched=reads_patched,
        original_trace=original_trace,
        patched_trace=patched_trace,
    )
