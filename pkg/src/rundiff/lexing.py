"""Line-level lexical helpers: literal/comment stripping and identifier scanning.

Used by scope detection (brace counting must ignore braces inside strings and
comments) and by the read-access analysis (identifiers must not be lexed out
of string literals). All stripping is line-local and replaces stripped spans
with spaces so character positions stay stable.
"""

from __future__ import annotations

import keyword

ScopeStrategy = str  # "brace" | "indent"

SCOPE_STRATEGIES = ("brace", "indent")

# Keywords excluded from read-access analysis, per scope strategy. The brace
# set covers the common C/C++/Java vocabulary including literal keywords.
BRACE_KEYWORDS = frozenset(
    """
    abstract assert auto boolean break byte case catch char class const
    continue default delete do double else enum extends extern final finally
    float for goto if implements import inline instanceof int interface long
    namespace native new nullptr package private protected public record
    register return sealed short signed sizeof static strictfp struct super
    switch synchronized template this throw throws transient try typedef
    typename union unsigned using var virtual void volatile while yield
    true false null
    """.split()
)

INDENT_KEYWORDS = frozenset(keyword.kwlist) | frozenset(keyword.softkwlist)


def keywords_for(strategy: ScopeStrategy) -> frozenset[str]:
    if strategy == "indent":
        return INDENT_KEYWORDS
    return BRACE_KEYWORDS


def strip_literals_and_comments(line: str, strategy: ScopeStrategy = "brace") -> str:
    """Blank out string/char literals and line comments, preserving length.

    Brace strategy strips "..."/'...' literals and //, /* */ comments;
    indent strategy strips "..."/'...' literals and # comments. Unterminated
    literals are stripped to end of line. Block comments are handled only
    within the line (no cross-line state).
    """
    out = list(line)
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if ch in ("\"", "'"):
            quote = ch
            j = i + 1
            while j < n:
                if line[j] == "\\":
                    j += 2
                    continue
                if line[j] == quote:
                    break
                j += 1
            end = min(j + 1, n)
            for k in range(i, end):
                out[k] = " "
            i = end
            continue
        if strategy == "indent" and ch == "#":
            for k in range(i, n):
                out[k] = " "
            break
        if strategy == "brace" and ch == "/" and i + 1 < n:
            if line[i + 1] == "/":
                for k in range(i, n):
                    out[k] = " "
                break
            if line[i + 1] == "*":
                j = line.find("*/", i + 2)
                end = n if j < 0 else j + 2
                for k in range(i, end):
                    out[k] = " "
                i = end
                continue
        i += 1
    return "".join(out)


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def scan_identifiers(code: str) -> list[tuple[str, int, int]]:
    """Return (name, start, end) for each identifier-like token in code.

    Numeric literals are consumed whole so the exponent of "1e5" or hex
    digits of "0xFF" are never reported as identifiers.
    """
    tokens: list[tuple[str, int, int]] = []
    i = 0
    n = len(code)
    while i < n:
        ch = code[i]
        if ch.isdigit():
            j = i + 1
            while j < n and (code[j].isalnum() or code[j] in "._"):
                j += 1
            i = j
            continue
        if _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_char(code[j]):
                j += 1
            tokens.append((code[i:j], i, j))
            i = j
            continue
        i += 1
    return tokens


def next_code_char(code: str, pos: int) -> str:
    """First non-space character at or after pos, or "" at end of line."""
    for ch in code[pos:]:
        if not ch.isspace():
            return ch
    return ""
