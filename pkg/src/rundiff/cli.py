"""Command-line front end.

Three commands: ``matched-lines`` prints the breakpoint-site pairs for a file
pair, ``compare`` runs the differencing pipeline over two already-collected
traces, and ``run`` drives an external collector over both working trees and
then compares. Exit codes encode the comparison outcome so callers can script
against them.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import shutil
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path

from .diffcore import SourceFile, matched_lines, myers_diff
from .errors import RunDiffError, UnbalancedScope
from .report import Outcome, build_augmented_diff, classify, emit_textual_output, first_unique
from .statediff import StateDiffResult, run_state_differencing
from .tracemodel import ExecutionTrace, TraceMetadata, parse_trace, serialize_trace

EXIT_INPUT_ERROR = 2
EXIT_UNBALANCED_SCOPE = 3
EXIT_COLLECTOR_FAILED = 4

_OUTCOME_EXIT_CODES = {
    Outcome.AUGMENTED_DIFF: 0,
    Outcome.INVISIBLE_DIFF: 10,
    Outcome.NO_DIFF_DETECTED: 11,
    Outcome.TIME_LIMIT: 12,
    Outcome.MEMORY_FAILURE: 13,
}

MEMORY_SENTINEL = "RUNDIFF-COLLECTOR: MEMORY"
COLLECTOR_ENV_VAR = "RUNDIFF_COLLECTOR"
DEFAULT_COLLECTOR = "rundiff-collect"

_EMPTY_RESULT = StateDiffResult((), (), (), ())


def exit_code_for(outcome: Outcome) -> int:
    """Exit code encoding an outcome; a function of the outcome only."""
    return _OUTCOME_EXIT_CODES[outcome]


@dataclass
class RunConfig:
    """Everything one comparison needs; depth >= 0 and time limit > 0."""

    original_path: str
    patched_path: str
    test_command: tuple[str, ...] = ()
    depth: int = 1
    scope_strategy: str = "brace"
    time_limit_seconds: float = 600.0
    output_dir: str = "rundiff-out"
    formats: frozenset[str] = frozenset({"html", "json"})
    changed_file: str | None = None
    context_lines: int = 3
    collector: str | None = None

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.time_limit_seconds <= 0:
            raise ValueError("time limit must be positive")


def _fail(message: str, code: int) -> int:
    print(f"rundiff: error: {message}", file=sys.stderr)
    return code


def _load_source(path: str) -> SourceFile:
    return SourceFile.from_path(path)


def cmd_matched_lines(config: RunConfig) -> int:
    """Print the (l_o, l_p) breakpoint-site pairs, tab-separated."""
    try:
        original = _load_source(config.original_path)
        patched = _load_source(config.patched_path)
    except OSError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)
    try:
        matched = matched_lines(original, patched, config.scope_strategy)
    except UnbalancedScope as exc:
        return _fail(str(exc), EXIT_UNBALANCED_SCOPE)
    for lo, lp in matched:
        print(f"{lo}\t{lp}")
    return 0


def _check_version_tag(trace: ExecutionTrace, expected: str, path: str) -> ExecutionTrace:
    tag = trace.metadata.version
    if tag is not None and tag != expected:
        raise RunDiffError(f"{path}: trace is tagged {tag!r} but given as the {expected} trace")
    if tag is None:
        metadata = dataclasses.replace(trace.metadata, version=expected)
        trace = dataclasses.replace(trace, metadata=metadata)
    return trace


def _write_reports(
    original: SourceFile,
    patched: SourceFile,
    result: StateDiffResult,
    outcome: Outcome,
    original_trace: ExecutionTrace,
    patched_trace: ExecutionTrace,
    test_id: str,
    config: RunConfig,
) -> None:
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if "json" in config.formats:
        report_doc, traces_doc = emit_textual_output(result, original_trace, patched_trace, outcome)
        (out_dir / "report.json").write_bytes(report_doc)
        (out_dir / "traces.json").write_bytes(traces_doc)
    if "html" in config.formats and outcome is Outcome.AUGMENTED_DIFF:
        augmented = build_augmented_diff(
            original,
            patched,
            myers_diff(original, patched),
            first_unique(result),
            test_id,
            config.context_lines,
        )
        (out_dir / "augmented-diff.html").write_text(augmented.unified_diff, encoding="utf-8")


def _write_failure_report(config: RunConfig, outcome: Outcome) -> None:
    if "json" not in config.formats:
        return
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    empty = ExecutionTrace(states=(), metadata=TraceMetadata())
    report_doc, _ = emit_textual_output(_EMPTY_RESULT, empty, empty, outcome)
    (out_dir / "report.json").write_bytes(report_doc)


def _print_summary(outcome: Outcome, result: StateDiffResult) -> None:
    print(f"outcome: {outcome.value}")
    original_sv, patched_sv = first_unique(result)
    if original_sv is not None:
        print(f"first unique (original): line {original_sv.line}  "
              f"{original_sv.path} = {original_sv.value}")
    if patched_sv is not None:
        print(f"first unique (patched):  line {patched_sv.line}  "
              f"{patched_sv.path} = {patched_sv.value}")


def _compare_traces(
    config: RunConfig,
    original: SourceFile,
    patched: SourceFile,
    original_trace: ExecutionTrace,
    patched_trace: ExecutionTrace,
) -> int:
    try:
        matched = matched_lines(original, patched, config.scope_strategy)
    except UnbalancedScope as exc:
        return _fail(str(exc), EXIT_UNBALANCED_SCOPE)
    try:
        result = run_state_differencing(
            original_trace, patched_trace, original, patched, matched, config.scope_strategy
        )
    except (RunDiffError, ValueError) as exc:
        return _fail(f"traces do not fit the given sources: {exc}", EXIT_INPUT_ERROR)
    outcome = classify(result)
    test_id = (
        original_trace.metadata.test_id
        or patched_trace.metadata.test_id
        or " ".join(config.test_command)
        or "<unknown test>"
    )
    _write_reports(
        original, patched, result, outcome, original_trace, patched_trace, test_id, config
    )
    _print_summary(outcome, result)
    return exit_code_for(outcome)


def cmd_compare(config: RunConfig, original_trace_path: str, patched_trace_path: str) -> int:
    """Compare two collected traces and write the reports."""
    try:
        original = _load_source(config.original_path)
        patched = _load_source(config.patched_path)
        original_raw = Path(original_trace_path).read_bytes()
        patched_raw = Path(patched_trace_path).read_bytes()
    except OSError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)
    try:
        original_trace = _check_version_tag(
            parse_trace(original_raw), "original", original_trace_path
        )
        patched_trace = _check_version_tag(parse_trace(patched_raw), "patched", patched_trace_path)
    except RunDiffError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)
    return _compare_traces(config, original, patched, original_trace, patched_trace)


def _discover_collector(config: RunConfig) -> str | None:
    candidate = config.collector or os.environ.get(COLLECTOR_ENV_VAR)
    if candidate:
        return candidate if Path(candidate).exists() else None
    return shutil.which(DEFAULT_COLLECTOR)


def _write_manifest(path: Path, changed_file: str, lines: list[int]) -> None:
    path.write_text("".join(f"{changed_file}:{line}\n" for line in lines), encoding="utf-8")


def cmd_run(config: RunConfig) -> int:
    """Collect traces for both working trees, then compare them."""
    if not config.test_command:
        return _fail("no test command given (pass it after --)", EXIT_INPUT_ERROR)
    if config.changed_file is None:
        return _fail("--file is required for run", EXIT_INPUT_ERROR)
    original_root = Path(config.original_path)
    patched_root = Path(config.patched_path)
    try:
        original = SourceFile.from_path(
            str(original_root / config.changed_file), config.changed_file
        )
        patched = SourceFile.from_path(str(patched_root / config.changed_file), config.changed_file)
    except OSError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)

    try:
        matched = matched_lines(original, patched, config.scope_strategy)
    except UnbalancedScope as exc:
        return _fail(str(exc), EXIT_UNBALANCED_SCOPE)

    collector = _discover_collector(config)
    if collector is None:
        return _fail(
            f"no collector found (use --collector, ${COLLECTOR_ENV_VAR}, or put "
            f"'{DEFAULT_COLLECTOR}' on PATH)",
            EXIT_INPUT_ERROR,
        )

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    runs = (
        ("original", original_root, matched.original_lines()),
        ("patched", patched_root, matched.patched_lines()),
    )
    traces: dict[str, ExecutionTrace] = {}
    for version, root, lines in runs:
        manifest_path = (out_dir / f"{version}.breakpoints.txt").resolve()
        _write_manifest(manifest_path, config.changed_file, lines)
        trace_path = (out_dir / f"{version}.trace.json").resolve()
        command = [
            collector,
            "--breakpoints", str(manifest_path),
            "--depth", str(config.depth),
            "--out", str(trace_path),
            "--",
            *config.test_command,
        ]
        try:
            proc = subprocess.run(
                command,
                cwd=str(root),
                capture_output=True,
                text=True,
                timeout=config.time_limit_seconds,
            )
        except subprocess.TimeoutExpired:
            _write_failure_report(config, Outcome.TIME_LIMIT)
            print(f"outcome: {Outcome.TIME_LIMIT.value}")
            return exit_code_for(Outcome.TIME_LIMIT)
        except OSError as exc:
            return _fail(f"cannot invoke collector {collector}: {exc}", EXIT_INPUT_ERROR)
        if proc.returncode != 0:
            if MEMORY_SENTINEL in proc.stderr:
                _write_failure_report(config, Outcome.MEMORY_FAILURE)
                print(f"outcome: {Outcome.MEMORY_FAILURE.value}")
                return exit_code_for(Outcome.MEMORY_FAILURE)
            sys.stderr.write(proc.stdout)
            sys.stderr.write(proc.stderr)
            return _fail(
                f"collector exited with status {proc.returncode} on the {version} version",
                EXIT_COLLECTOR_FAILED,
            )
        try:
            trace = _check_version_tag(
                parse_trace(trace_path.read_bytes()), version, str(trace_path)
            )
        except (RunDiffError, OSError) as exc:
            return _fail(f"collector produced an unusable trace: {exc}", EXIT_INPUT_ERROR)
        # Persist the version tag so `compare` on these files is equivalent.
        trace_path.write_bytes(serialize_trace(trace))
        traces[version] = trace

    return _compare_traces(config, original, patched, traces["original"], traces["patched"])


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _add_shared_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scope-strategy",
        choices=("brace", "indent"),
        default="brace",
        help="how method-like scopes are detected (default: brace)",
    )
    parser.add_argument(
        "--output-dir", default="rundiff-out", help="where reports are written"
    )
    parser.add_argument(
        "--format",
        dest="formats",
        action="append",
        choices=("html", "json"),
        help="output format; repeatable (default: both)",
    )
    parser.add_argument(
        "--context-lines",
        type=_nonnegative_int,
        default=3,
        help="context lines around each hunk in the rendered diff (default: 3)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rundiff",
        description="Compare how two versions of a program behave at runtime "
        "and annotate the source diff with the first divergent value.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_matched = sub.add_parser(
        "matched-lines", help="print the unchanged line pairs used as breakpoint sites"
    )
    p_matched.add_argument("original")
    p_matched.add_argument("patched")
    p_matched.add_argument(
        "--scope-strategy", choices=("brace", "indent"), default="brace"
    )

    p_compare = sub.add_parser("compare", help="compare two collected traces")
    p_compare.add_argument("original_src")
    p_compare.add_argument("patched_src")
    p_compare.add_argument("original_trace")
    p_compare.add_argument("patched_trace")
    _add_shared_options(p_compare)

    p_run = sub.add_parser(
        "run", help="collect traces for both working trees, then compare"
    )
    p_run.add_argument("--original", required=True, help="original working tree root")
    p_run.add_argument("--patched", required=True, help="patched working tree root")
    p_run.add_argument(
        "--file", required=True, help="changed file, relative to both roots"
    )
    p_run.add_argument("--depth", type=_nonnegative_int, default=1)
    p_run.add_argument(
        "--time-limit",
        type=_positive_float,
        default=600.0,
        help="seconds allowed per collector invocation (default: 600)",
    )
    p_run.add_argument("--collector", help="collector executable path")
    _add_shared_options(p_run)
    p_run.add_argument(
        "test_command",
        nargs=argparse.REMAINDER,
        help="covering-test command, after --",
    )
    return parser


def _formats(values: list[str] | None) -> frozenset[str]:
    return frozenset(values) if values else frozenset({"html", "json"})


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "matched-lines":
        config = RunConfig(
            original_path=args.original,
            patched_path=args.patched,
            scope_strategy=args.scope_strategy,
        )
        return cmd_matched_lines(config)

    if args.command == "compare":
        config = RunConfig(
            original_path=args.original_src,
            patched_path=args.patched_src,
            scope_strategy=args.scope_strategy,
            output_dir=args.output_dir,
            formats=_formats(args.formats),
            context_lines=args.context_lines,
        )
        return cmd_compare(config, args.original_trace, args.patched_trace)

    test_command = list(args.test_command)
    if test_command and test_command[0] == "--":
        test_command = test_command[1:]
    config = RunConfig(
        original_path=args.original,
        patched_path=args.patched,
        test_command=tuple(test_command),
        depth=args.depth,
        scope_strategy=args.scope_strategy,
        time_limit_seconds=args.time_limit,
        output_dir=args.output_dir,
        formats=_formats(args.formats),
        changed_file=args.file,
        context_lines=args.context_lines,
        collector=args.collector,
    )
    return cmd_run(config)


if __name__ == "__main__":
    sys.exit(main())
