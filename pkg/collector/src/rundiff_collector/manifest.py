"""Breakpoint manifest: one "path:line" entry per line, paths project-relative."""

from __future__ import annotations


class ManifestError(ValueError):
    pass


def parse_manifest(text: str) -> dict[str, set[int]]:
    """Group manifest entries by file; blank lines and #-comments are skipped."""
    entries: dict[str, set[int]] = {}
    for number, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        path, sep, line_text = line.rpartition(":")
        if not sep or not path:
            raise ManifestError(f"manifest line {number}: expected path:line, got {raw!r}")
        try:
            lineno = int(line_text)
        except ValueError:
            raise ManifestError(f"manifest line {number}: bad line number {line_text!r}") from None
        if lineno < 1:
            raise ManifestError(f"manifest line {number}: line numbers start at 1")
        if path.startswith("/") or path.startswith("\\"):
            raise ManifestError(f"manifest line {number}: paths must be project-relative")
        entries.setdefault(path, set()).add(lineno)
    return entries
