"""Line diffing and breakpoint-site selection.

Computes the minimal line diff between two versions of a source file
(Myers' O(ND) algorithm over the longest-common-subsequence model), detects
method-like scopes, and derives the matched lines: unchanged line pairs lying
inside a scope that was touched by the change. Matched lines are where the
collector places its breakpoints, so they are the closest observable lines
to the change.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import UnbalancedScope
from .lexing import ScopeStrategy, scan_identifiers, strip_literals_and_comments


@dataclass(frozen=True)
class SourceFile:
    """One version of a source file; lines are 1-indexed and dense."""

    path: str
    lines: tuple[str, ...]

    @classmethod
    def from_text(cls, path: str, text: str) -> "SourceFile":
        raw = text.split("\n")
        if raw and raw[-1] == "":
            raw.pop()
        return cls(path, tuple(line[:-1] if line.endswith("\r") else line for line in raw))

    @classmethod
    def from_path(cls, path: str, display_path: str | None = None) -> "SourceFile":
        with open(path, encoding="utf-8") as handle:
            return cls.from_text(display_path or path, handle.read())

    def line(self, number: int) -> str:
        if not 1 <= number <= len(self.lines):
            raise ValueError(f"line {number} out of range for {self.path} (1..{len(self.lines)})")
        return self.lines[number - 1]


@dataclass(frozen=True)
class LineDiff:
    """Minimal edit script: deleted/inserted line sets + the LCS alignment."""

    deleted: frozenset[int]
    inserted: frozenset[int]
    unchanged_map: tuple[tuple[int, int], ...]

    def to_patched(self) -> dict[int, int]:
        return {lo: lp for lo, lp in self.unchanged_map}

    def to_original(self) -> dict[int, int]:
        return {lp: lo for lo, lp in self.unchanged_map}


@dataclass(frozen=True)
class Scope:
    """A method-like region of a file, or the whole-file fallback."""

    start_line: int
    end_line: int
    kind: str  # "function" | "file"

    def contains(self, line: int) -> bool:
        return self.start_line <= line <= self.end_line


@dataclass(frozen=True)
class MatchedLines:
    """Unchanged (l_o, l_p) pairs inside changed scopes, ordered by l_o."""

    pairs: tuple[tuple[int, int], ...]

    def to_original(self) -> dict[int, int]:
        return {lp: lo for lo, lp in self.pairs}

    def to_patched(self) -> dict[int, int]:
        return {lo: lp for lo, lp in self.pairs}

    def original_lines(self) -> list[int]:
        return [lo for lo, _ in self.pairs]

    def patched_lines(self) -> list[int]:
        return [lp for _, lp in self.pairs]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def _lcs_pairs(a: tuple[str, ...], b: tuple[str, ...]) -> list[tuple[int, int]]:
    """Myers greedy shortest-edit search; returns matched 0-based index pairs."""
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return []
    v: dict[int, int] = {1: 0}
    trace: list[dict[int, int]] = []
    found = False
    for d in range(n + m + 1):
        trace.append(dict(v))
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v.get(k - 1, 0) < v.get(k + 1, 0)):
                x = v.get(k + 1, 0)
            else:
                x = v.get(k - 1, 0) + 1
            y = x - k
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            v[k] = x
            if x >= n and y >= m:
                found = True
                break
        if found:
            break

    pairs: list[tuple[int, int]] = []
    x, y = n, m
    for d in range(len(trace) - 1, -1, -1):
        vd = trace[d]
        k = x - y
        if k == -d or (k != d and vd.get(k - 1, 0) < vd.get(k + 1, 0)):
            prev_k = k + 1
        else:
            prev_k = k - 1
        prev_x = vd.get(prev_k, 0)
        prev_y = prev_x - prev_k
        while x > prev_x and y > prev_y:
            pairs.append((x - 1, y - 1))
            x -= 1
            y -= 1
        if d > 0:
            x, y = prev_x, prev_y
    pairs.reverse()
    return pairs


def myers_diff(original: SourceFile, patched: SourceFile) -> LineDiff:
    """Minimal line diff between two file versions.

    The result is canonically oriented: when the patched line sequence sorts
    lexicographically before the original one, the diff is computed on the
    swapped pair and inverted, which makes swapping the inputs swap
    deleted/inserted and invert the alignment exactly even for inputs with
    several equally-minimal scripts.
    """
    if patched.lines < original.lines:
        flipped = myers_diff(patched, original)
        return LineDiff(
            deleted=flipped.inserted,
            inserted=flipped.deleted,
            unchanged_map=tuple((lp, lo) for lo, lp in flipped.unchanged_map),
        )
    matches = _lcs_pairs(original.lines, patched.lines)
    unchanged = tuple((i + 1, j + 1) for i, j in matches)
    matched_o = {i for i, _ in unchanged}
    matched_p = {j for _, j in unchanged}
    deleted = frozenset(i for i in range(1, len(original.lines) + 1) if i not in matched_o)
    inserted = frozenset(j for j in range(1, len(patched.lines) + 1) if j not in matched_p)
    return LineDiff(deleted=deleted, inserted=inserted, unchanged_map=unchanged)


# Tokens that disqualify a brace-style header line from being a method header:
# control flow, type declarations, and object construction.
_NON_METHOD_HEADS = frozenset(
    """
    if else for while switch case catch do try synchronized return throw
    new assert class interface enum record struct union namespace
    """.split()
)

_INDENT_HEADER_RE = re.compile(r"^(\s*)(?:async\s+)?def\s+[A-Za-z_]\w*\s*\(")


def _method_header_name(code: str) -> bool:
    """Heuristic: does this stripped code line start a method-like scope?

    Requires an identifier immediately before the first "(" that is not a
    control keyword, not preceded by "." (call chains) or "new", plus at
    least one modifier/return-type token before the name, and no "=" before
    the parameter list (rules out lambda assignments and initializers).
    """
    paren = code.find("(")
    if paren < 0:
        return False
    pre = code[:paren]
    if "=" in pre or ";" in pre:
        return False
    idents = scan_identifiers(pre)
    if not idents:
        return False
    name, start, end = idents[-1]
    if end != len(pre.rstrip()):
        return False
    if name in _NON_METHOD_HEADS:
        return False
    before = pre[:start]
    if before.rstrip().endswith("."):
        return False
    head_tokens = [tok for tok, _, _ in idents[:-1]]
    if not head_tokens:
        return False
    if any(tok in _NON_METHOD_HEADS for tok in head_tokens):
        return False
    return True


def _detect_brace_scopes(src: SourceFile) -> list[Scope]:
    scopes: list[Scope] = []
    stack: list[tuple[int, int]] = []  # (header line, depth after its opening brace)
    depth = 0
    pending_header: int | None = None
    for number, raw in enumerate(src.lines, start=1):
        code = strip_literals_and_comments(raw, "brace").strip()
        header_line: int | None = None
        if pending_header is not None and code:
            if code.startswith("{"):
                header_line = pending_header
            pending_header = None
        if header_line is None and _method_header_name(code):
            if code.endswith("{"):
                header_line = number
            elif code.endswith(")"):
                pending_header = number  # Allman style: brace on the next line
        for ch in code:
            if ch == "{":
                depth += 1
                if header_line is not None:
                    stack.append((header_line, depth))
                    header_line = None
            elif ch == "}":
                if depth == 0:
                    raise UnbalancedScope(src.path, number, "unmatched closing brace")
                if stack and stack[-1][1] == depth:
                    start, _ = stack.pop()
                    scopes.append(Scope(start, number, "function"))
                depth -= 1
    if stack:
        raise UnbalancedScope(src.path, stack[-1][0], "scope opened here is never closed")
    if depth != 0:
        raise UnbalancedScope(src.path, len(src.lines), "unbalanced braces at end of file")
    scopes.sort(key=lambda s: (s.start_line, -s.end_line))
    return scopes


def _indent_width(line: str) -> int:
    expanded = line.expandtabs()
    return len(expanded) - len(expanded.lstrip())


def _detect_indent_scopes(src: SourceFile) -> list[Scope]:
    scopes: list[Scope] = []
    for number, raw in enumerate(src.lines, start=1):
        code = strip_literals_and_comments(raw, "indent")
        match = _INDENT_HEADER_RE.match(code)
        if not match:
            continue
        header_indent = _indent_width(code)
        end = number
        for follow in range(number + 1, len(src.lines) + 1):
            follow_code = strip_literals_and_comments(src.lines[follow - 1], "indent")
            if not follow_code.strip():
                continue  # blank/comment lines do not end the block
            if _indent_width(follow_code) <= header_indent:
                break
            end = follow
        scopes.append(Scope(number, end, "function"))
    return scopes


def detect_scopes(src: SourceFile, strategy: ScopeStrategy = "brace") -> list[Scope]:
    """Method-like scopes of a file; a single whole-file scope if none found.

    brace: a scope spans a header line through its balancing closing brace.
    indent: a scope spans a definition header through the last line indented
    deeper than the header.
    """
    if strategy not in ("brace", "indent"):
        raise ValueError(f"unknown scope strategy: {strategy!r}")
    if not src.lines:
        return []
    if strategy == "brace":
        scopes = _detect_brace_scopes(src)
    else:
        scopes = _detect_indent_scopes(src)
    if not scopes:
        return [Scope(1, len(src.lines), "file")]
    return scopes


def _interior_contains(scope: Scope, line: int, strategy: ScopeStrategy) -> bool:
    # The header line is never a breakpoint site; for brace scopes neither is
    # the line holding the balancing brace. Whole-file scopes have no header.
    if scope.kind == "file":
        return scope.start_line <= line <= scope.end_line
    if strategy == "brace":
        return scope.start_line < line < scope.end_line
    return scope.start_line < line <= scope.end_line


def _changed_scopes(scopes: list[Scope], diff_lines: frozenset[int], total_lines: int) -> list[Scope]:
    changed: list[Scope] = []
    fallback_needed = False
    for line in sorted(diff_lines):
        covering = [s for s in scopes if s.contains(line)]
        if covering:
            for scope in covering:
                if scope not in changed:
                    changed.append(scope)
        else:
            fallback_needed = True
    if fallback_needed and total_lines:
        whole = Scope(1, total_lines, "file")
        if whole not in changed:
            changed.append(whole)
    return changed


def matched_lines(
    original: SourceFile, patched: SourceFile, strategy: ScopeStrategy = "brace"
) -> MatchedLines:
    """Unchanged line pairs lying inside a scope touched by the change.

    A pair (l_o, l_p) qualifies when l_o is interior to an original-version
    scope containing a deleted line, or l_p is interior to a patched-version
    scope containing an inserted line (so insertion-only changes still light
    up the enclosing scope). Diff lines outside every detected scope fall
    back to the whole-file scope.
    """
    diff = myers_diff(original, patched)
    changed_original = _changed_scopes(
        detect_scopes(original, strategy), diff.deleted, len(original.lines)
    )
    changed_patched = _changed_scopes(
        detect_scopes(patched, strategy), diff.inserted, len(patched.lines)
    )
    pairs = tuple(
        (lo, lp)
        for lo, lp in diff.unchanged_map
        if any(_interior_contains(s, lo, strategy) for s in changed_original)
        or any(_interior_contains(s, lp, strategy) for s in changed_patched)
    )
    return MatchedLines(pairs)
