"""Trace collector for Python test runs: depth-bounded program-state capture
at manifest breakpoints, emitting the engine's wire format."""

from .capture import CaptureConfig, capture_value
from .cli import CollectResult, collect, main, run_test_command
from .manifest import ManifestError, parse_manifest
from .tracer import BreakpointTracer

__version__ = "0.1.0"

__all__ = [
    "BreakpointTracer",
    "CaptureConfig",
    "CollectResult",
    "ManifestError",
    "capture_value",
    "collect",
    "main",
    "parse_manifest",
    "run_test_command",
]
