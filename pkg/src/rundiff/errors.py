"""Exception types shared across the engine."""

from __future__ import annotations


class RunDiffError(Exception):
    """Base class for all engine errors."""


class UnbalancedScope(RunDiffError):
    """Brace-balanced scope detection found unmatched braces."""

    def __init__(self, path: str, line: int, reason: str):
        super().__init__(f"{path}:{line}: {reason}")
        self.path = path
        self.line = line
        self.reason = reason


class MalformedTrace(RunDiffError):
    """A trace document violates the wire schema."""

    def __init__(self, position: str, reason: str):
        super().__init__(f"{position or '<document>'}: {reason}")
        self.position = position
        self.reason = reason


class DepthViolation(MalformedTrace):
    """Value nesting in a trace exceeds its declared capture depth."""


class NotPrimitive(RunDiffError):
    """A non-leaf runtime value was passed where a primitive is required."""


class UnmappedLine(RunDiffError):
    """A patched-version state sits on a line with no matched original line."""

    def __init__(self, line: int):
        super().__init__(f"patched line {line} has no matched original line")
        self.line = line


class AnchorMissing(RunDiffError):
    """A runtime annotation refers to a line absent from the rendered file."""
