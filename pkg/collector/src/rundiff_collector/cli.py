"""Collector entry point.

Invocation:

    rundiff-collect --breakpoints MANIFEST --depth D --out TRACE \\
        [--max-array N] [--max-str N] -- <test command>

Runs the test command in-process under line tracing (the command must be a
Python script or ``-m module`` invocation, optionally prefixed with a python
interpreter token), captures a program state at every execution of a manifest
line, and writes the trace document to --out. The trace is flushed even when
the test crashes; allocation failure is signalled with a MEMORY sentinel on
stderr and a nonzero exit.
"""

from __future__ import annotations

import argparse
import os
import re
import runpy
import sys
import traceback
from dataclasses import dataclass

from .capture import CaptureConfig
from .manifest import ManifestError, parse_manifest
from .tracer import BreakpointTracer
from .wire import build_document, write_document

__version__ = "0.1.0"

MEMORY_SENTINEL = "RUNDIFF-COLLECTOR: MEMORY"

EXIT_OK = 0
EXIT_TEST_FAILED = 1
EXIT_USAGE = 2
EXIT_MEMORY = 3

_INTERPRETER_RE = re.compile(r"^python[0-9.]*$")


class UnsupportedCommand(ValueError):
    pass


def _strip_interpreter(argv: list[str]) -> list[str]:
    if argv and (
        _INTERPRETER_RE.match(os.path.basename(argv[0]))
        or os.path.abspath(argv[0]) == os.path.abspath(sys.executable)
    ):
        return argv[1:]
    return argv


def run_test_command(argv: list[str]) -> None:
    """Execute the covering test in this (traced) interpreter."""
    argv = _strip_interpreter(list(argv))
    if not argv:
        raise UnsupportedCommand("empty test command")
    if argv[0] == "-m":
        if len(argv) < 2:
            raise UnsupportedCommand("-m needs a module name")
        sys.argv = argv[1:]
        runpy.run_module(argv[1], run_name="__main__", alter_sys=True)
        return
    if argv[0].endswith(".py"):
        script = argv[0]
        sys.argv = [script] + argv[1:]
        sys.path.insert(0, os.path.abspath(os.path.dirname(script) or "."))
        runpy.run_path(script, run_name="__main__")
        return
    raise UnsupportedCommand(
        f"cannot run {argv[0]!r} in-process; give a .py script or '-m module'"
    )


@dataclass
class CollectResult:
    document: dict
    failure: str | None  # None | "test" | "memory" | "usage"
    diagnostics: str


def collect(
    manifest: dict[str, set[int]],
    cfg: CaptureConfig,
    test_command: list[str],
    root: str = ".",
) -> CollectResult:
    """Run the test under tracing and build the trace document.

    The document is built even on failure so a partial trace survives.
    """
    tracer = BreakpointTracer(manifest, cfg, root)
    failure = None
    diagnostics = ""
    tracer.install()
    try:
        run_test_command(test_command)
    except MemoryError:
        failure = "memory"
    except UnsupportedCommand as exc:
        failure = "usage"
        diagnostics = str(exc)
    except SystemExit as exc:
        if exc.code not in (0, None):
            failure = "test"
            diagnostics = f"test command exited with status {exc.code}"
    except BaseException:
        failure = "test"
        diagnostics = traceback.format_exc()
    finally:
        tracer.uninstall()

    document = build_document(
        tracer.states,
        test_id=" ".join(test_command),
        depth=cfg.depth,
        collector=f"rundiff-collect {__version__}",
        extra={
            "maxArrayElements": cfg.max_array_elements,
            "maxStringLength": cfg.max_string_length,
            "threads": "main-only",
        },
    )
    return CollectResult(document=document, failure=failure, diagnostics=diagnostics)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rundiff-collect",
        description="Run a covering test under line tracing and record program "
        "states at the manifest breakpoints.",
    )
    parser.add_argument("--breakpoints", required=True, help="manifest file (path:line per line)")
    parser.add_argument("--depth", type=int, required=True, help="object capture depth (>= 0)")
    parser.add_argument("--out", required=True, help="trace output file")
    parser.add_argument("--max-array", type=int, default=256, dest="max_array")
    parser.add_argument("--max-str", type=int, default=4096, dest="max_str")
    parser.add_argument("test_command", nargs=argparse.REMAINDER)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    test_command = list(args.test_command)
    if test_command and test_command[0] == "--":
        test_command = test_command[1:]
    if not test_command:
        print("rundiff-collect: error: no test command after --", file=sys.stderr)
        return EXIT_USAGE

    try:
        cfg = CaptureConfig(
            depth=args.depth, max_array_elements=args.max_array, max_string_length=args.max_str
        )
    except ValueError as exc:
        print(f"rundiff-collect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        manifest_text = open(args.breakpoints, encoding="utf-8").read()
        manifest = parse_manifest(manifest_text)
    except (OSError, ManifestError) as exc:
        print(f"rundiff-collect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    result = collect(manifest, cfg, test_command, root=os.getcwd())
    write_document(result.document, args.out)

    if result.failure == "memory":
        print(MEMORY_SENTINEL, file=sys.stderr)
        return EXIT_MEMORY
    if result.failure == "usage":
        print(f"rundiff-collect: error: {result.diagnostics}", file=sys.stderr)
        return EXIT_USAGE
    if result.failure == "test":
        sys.stderr.write(result.diagnostics)
        if not result.diagnostics.endswith("\n"):
            sys.stderr.write("\n")
        print("rundiff-collect: test command failed; partial trace flushed", file=sys.stderr)
        return EXIT_TEST_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
