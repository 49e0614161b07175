"""Line-tracing hooks that capture program states at manifest breakpoints.

The tracer installs a global sys.settrace hook, activates per-line tracing
only for frames whose file appears in the breakpoint manifest, and appends
one program state per execution of a manifest line, in execution order. A
line that is a return statement is captured at the frame's return event
instead, so the state can include the RETURN-kind value. Only the thread the
tracer was installed on is traced.
"""

from __future__ import annotations

import os
import sys

from .capture import (
    KIND_FIELD,
    KIND_LOCAL,
    KIND_RETURN,
    RETURN_NAME,
    CaptureConfig,
    _is_dunder,
    capture_value,
)


def module_label(path: str, root: str) -> str:
    """Dotted module-ish label for a file, e.g. demo/calc.py -> demo.calc."""
    rel = os.path.relpath(path, root)
    if rel.startswith(".."):
        rel = os.path.basename(path)
    if rel.endswith(".py"):
        rel = rel[:-3]
    return rel.replace(os.sep, ".").replace("/", ".")


class BreakpointTracer:
    """Collects one state per execution of each (file, line) in the manifest."""

    def __init__(self, manifest: dict[str, set[int]], cfg: CaptureConfig, root: str):
        # manifest keys are absolute paths; display paths stay root-relative.
        self.cfg = cfg
        self.root = os.path.abspath(root)
        self.files = {os.path.abspath(path): lines for path, lines in manifest.items()}
        self.states: list[dict] = []
        self._source: dict[str, list[str]] = {}
        for path in self.files:
            try:
                with open(path, encoding="utf-8") as handle:
                    self._source[path] = handle.read().split("\n")
            except OSError:
                self._source[path] = []

    def install(self) -> None:
        sys.settrace(self._trace_global)

    def uninstall(self) -> None:
        sys.settrace(None)

    def _trace_global(self, frame, event, arg):
        if event != "call":
            return None
        if os.path.abspath(frame.f_code.co_filename) in self.files:
            return self._trace_local
        return None

    def _trace_local(self, frame, event, arg):
        path = os.path.abspath(frame.f_code.co_filename)
        lines = self.files.get(path)
        if lines is None:
            return self._trace_local
        if event == "line" and frame.f_lineno in lines:
            if not self._is_return_line(path, frame.f_lineno):
                self._record(frame, path, frame.f_lineno)
        elif event == "return" and frame.f_lineno in lines:
            if self._is_return_line(path, frame.f_lineno):
                self._record(frame, path, frame.f_lineno, return_value=arg, has_return=True)
        return self._trace_local

    def _is_return_line(self, path: str, lineno: int) -> bool:
        source = self._source.get(path, [])
        if not 1 <= lineno <= len(source):
            return False
        return source[lineno - 1].lstrip().startswith("return")

    def _capture_locals(self, frame) -> list[dict]:
        values = []
        frame_locals = frame.f_locals
        for name in sorted(frame_locals):
            if _is_dunder(name):
                continue
            values.append(
                capture_value(frame_locals[name], name, KIND_LOCAL, self.cfg.depth, self.cfg)
            )
        receiver = frame_locals.get("self")
        if receiver is not None:
            for field_name in sorted(vars(receiver)) if hasattr(receiver, "__dict__") else []:
                if _is_dunder(field_name):
                    continue
                values.append(
                    capture_value(
                        getattr(receiver, field_name), field_name, KIND_FIELD,
                        self.cfg.depth, self.cfg,
                    )
                )
        return values

    def _stack_trace(self, frame) -> list[str]:
        entries = []
        current = frame
        while current is not None:
            path = os.path.abspath(current.f_code.co_filename)
            if path.startswith(self.root + os.sep) or path in self.files:
                label = module_label(path, self.root)
                entries.append(f"{current.f_code.co_name}:{current.f_lineno}, {label}")
            current = current.f_back
        return entries or [f"{frame.f_code.co_name}:{frame.f_lineno}, <external>"]

    def _record(self, frame, path: str, lineno: int, return_value=None, has_return=False) -> None:
        values = self._capture_locals(frame)
        if has_return:
            values.append(
                capture_value(return_value, RETURN_NAME, KIND_RETURN, self.cfg.depth, self.cfg)
            )
        rel = os.path.relpath(path, self.root)
        self.states.append(
            {
                "file": rel.replace(os.sep, "/"),
                "lineNumber": lineno,
                "stackFrameContexts": [
                    {
                        "positionFromTopInStackTrace": 1,
                        "location": f"{module_label(path, self.root)}:{lineno}",
                        "stackTrace": self._stack_trace(frame),
                        "runtimeValueCollection": values,
                    }
                ],
            }
        )
