"""Canonical trace-document writer (fixed key order, 2-space indent, LF)."""

from __future__ import annotations

import json


def build_document(
    states: list[dict],
    test_id: str,
    depth: int,
    collector: str,
    extra: dict | None = None,
) -> dict:
    metadata = {
        "version": None,
        "testId": test_id,
        "depth": depth,
        "collector": collector,
    }
    for key in sorted(extra or {}):
        metadata[key] = extra[key]
    return {"metadata": metadata, "breakpoint": states}


def write_document(document: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(document, handle, indent=2, ensure_ascii=False)
        handle.write("\n")
