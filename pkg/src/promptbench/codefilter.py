"""Extract runnable source from raw model output and scan it for
disallowed constructs.

The scanner is a lightweight, total lexer for Python-style source: it
never raises, it assigns every input character to exactly one token, and
joining the lexemes in order reproduces the input byte for byte.  That
losslessness is what makes construct detection trustworthy: a name only
counts as a construct occurrence when it appears as an identifier or
keyword token, never inside a string literal or comment.
"""

from __future__ import annotations

import keyword
import re
from dataclasses import dataclass

from .errors import NoCode

IDENTIFIER = "identifier"
KEYWORD = "keyword"
STRING_LITERAL = "string_literal"
COMMENT = "comment"
NUMBER = "number"
OPERATOR = "operator"
NEWLINE = "newline"
INDENT_WS = "indent_ws"

_KEYWORDS = frozenset(keyword.kwlist)
# Legal string-literal prefixes (case-insensitive): r, b, u, f and the
# two-letter raw combinations.
_STRING_PREFIXES = frozenset({"r", "b", "u", "f", "rb", "br", "fr", "rf"})
_HORIZONTAL_WS = " \t\f\v"

_NUMBER_RE = re.compile(
    r"""
    (?: 0[xX][0-9a-fA-F_]+
      | 0[oO][0-7_]+
      | 0[bB][01_]+
      | (?: \d[\d_]* (?: \.[\d_]* )? | \.\d[\d_]* )
        (?: [eE][+-]? \d[\d_]* )?
    )
    [jJ]?
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int    # 1-based
    column: int  # 1-based


@dataclass(frozen=True)
class ExtractedCode:
    source: str
    origin: str  # "fenced" | "whole_text"
    fence_language_tag: str | None = None


@dataclass(frozen=True)
class ConstructMatch:
    construct: str
    line: int
    column: int


def extract_code(raw_text: str) -> ExtractedCode:
    """Recover runnable source from a raw model response.

    The first triple-backtick fenced block wins when one exists (language
    tag stripped but recorded); otherwise the whole text is taken with
    leading and trailing blank lines removed.  Raises NoCode when the
    result is empty.
    """
    start = raw_text.find("```")
    if start == -1:
        source = _trim_blank_lines(raw_text)
        if not source.strip():
            raise NoCode("response contains no code")
        return ExtractedCode(source=source, origin="whole_text")

    after = start + 3
    newline = raw_text.find("\n", after)
    close = raw_text.find("```", after)

    if close != -1 and (newline == -1 or close < newline):
        # Closing fence on the opening line: ``````, or ```x = 1```.
        tag = None
        body = raw_text[after:close]
    elif newline == -1:
        # ``` with no newline and no closing fence; nothing follows the tag.
        tag = raw_text[after:].strip() or None
        body = ""
    else:
        tag = raw_text[after:newline].strip() or None
        close = raw_text.find("```", newline + 1)
        body = raw_text[newline + 1 : close if close != -1 else len(raw_text)]

    source = _trim_blank_lines(body)
    if not source.strip():
        raise NoCode("fenced block is empty")
    return ExtractedCode(source=source, origin="fenced", fence_language_tag=tag)


def _trim_blank_lines(text: str) -> str:
    """Drop leading/trailing whitespace-only lines, keep interior layout."""
    lines = text.splitlines()
    lo, hi = 0, len(lines)
    while lo < hi and not lines[lo].strip():
        lo += 1
    while hi > lo and not lines[hi - 1].strip():
        hi -= 1
    return "\n".join(lines[lo:hi])


def lex(source: str) -> list[Token]:
    """Tokenize source losslessly; total over arbitrary input.

    Unterminated strings run to end of line (one-quote forms) or end of
    input (triple-quote forms) and still lex as string_literal.  Bytes
    that fit no category become single-character operator tokens.
    """
    tokens: list[Token] = []
    i = 0
    line, col = 1, 1
    n = len(source)

    def emit(kind: str, end: int) -> None:
        nonlocal i, line, col
        lexeme = source[i:end]
        tokens.append(Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        i = end

    while i < n:
        c = source[i]

        if c == "\r":
            emit(NEWLINE, i + 2 if source.startswith("\r\n", i) else i + 1)
            # emit counts only "\n"; a bare "\r" still starts a new line
            if not tokens[-1].lexeme.endswith("\n"):
                line += 1
                col = 1
            continue
        if c == "\n":
            emit(NEWLINE, i + 1)
            continue
        if c in _HORIZONTAL_WS:
            j = i + 1
            while j < n and source[j] in _HORIZONTAL_WS:
                j += 1
            emit(INDENT_WS, j)
            continue
        if c == "#":
            j = i + 1
            while j < n and source[j] not in "\r\n":
                j += 1
            emit(COMMENT, j)
            continue
        if c in "'\"":
            emit(STRING_LITERAL, _scan_string(source, i))
            continue
        if c.isalpha() or c == "_":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            if j < n and source[j] in "'\"" and word.lower() in _STRING_PREFIXES:
                emit(STRING_LITERAL, _scan_string(source, j))
            elif word in _KEYWORDS:
                emit(KEYWORD, j)
            else:
                emit(IDENTIFIER, j)
            continue
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _NUMBER_RE.match(source, i)
            if m:
                emit(NUMBER, m.end())
                continue
        emit(OPERATOR, i + 1)

    return tokens


def _scan_string(source: str, quote_pos: int) -> int:
    """Return the end index of the string whose opening quote is at quote_pos.

    Backslash escapes the following character in every form, matching how
    the tokenizer treats raw strings.  One-quote strings stop at an
    unescaped newline; triple-quote strings may run to end of input.
    """
    n = len(source)
    q = source[quote_pos]
    triple = source.startswith(q * 3, quote_pos)
    j = quote_pos + (3 if triple else 1)

    while j < n:
        c = source[j]
        if c == "\\":
            j += 2
            continue
        if triple:
            if source.startswith(q * 3, j):
                return j + 3
            j += 1
        else:
            if c == q:
                return j + 1
            if c in "\r\n":
                return j  # unterminated; newline stays outside the token
            j += 1
    return n


def detect_constructs(source: str, disallowed: list[str]) -> list[ConstructMatch]:
    """Find disallowed names appearing as identifier or keyword tokens.

    Occurrences inside string literals or comments never match.  Matches
    come back in document order.
    """
    wanted = set(disallowed)
    if not wanted:
        return []
    return [
        ConstructMatch(construct=tok.lexeme, line=tok.line, column=tok.column)
        for tok in lex(source)
        if tok.kind in (IDENTIFIER, KEYWORD) and tok.lexeme in wanted
    ]
