"""Lexer for the MiniC input language.

Token offsets are byte-accurate so downstream stages can slice verbatim
statement text back out of the source.
"""

from __future__ import annotations

from dataclasses import dataclass

from quarry.errors import LexError

KEYWORDS = frozenset({"int", "char", "void", "if", "else", "while", "return"})

# Longest operators first so two-char forms win over their prefixes.
OPERATORS = (
    "==", "!=", "<=", ">=", "&&", "||",
    "=", "<", ">", "+", "-", "*", "/", "%", "&", "!", "|",
    "(", ")", "{", "}", "[", "]", ";", ",",
)


@dataclass(frozen=True)
class Span:
    """Start position of a lexical element; line and col are 1-based."""

    file: str
    line: int
    col: int


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | ident | number | string | punct
    text: str
    line: int
    col: int
    offset: int  # byte offset into the source

    @property
    def end(self) -> int:
        return self.offset + len(self.text)

    def span(self, file: str) -> Span:
        return Span(file, self.line, self.col)


def tokenize(source: str, file: str = "<input>") -> list[Token]:
    """Split source into tokens, skipping whitespace and comments.

    Raises LexError on a character outside the MiniC alphabet. The token
    stream plus the skipped gaps reproduces the input exactly.
    """
    tokens: list[Token] = []
    i = 0
    line = 1
    line_start = 0
    n = len(source)

    def col(pos: int) -> int:
        return pos - line_start + 1

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            line_start = i
            continue
        if ch in " \t\r":
            i += 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise LexError("unterminated block comment", file, line, col(i))
            for k in range(i, j + 2):
                if source[k] == "\n":
                    line += 1
                    line_start = k + 1
            i = j + 2
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            kind = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, line, col(i), i))
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("number", source[i:j], line, col(i), i))
            i = j
            continue
        if ch == '"':
            j = i + 1
            while j < n:
                if source[j] == "\\" and j + 1 < n:
                    j += 2
                    continue
                if source[j] == '"':
                    break
                if source[j] == "\n":
                    raise LexError("unterminated string literal", file, line, col(i))
                j += 1
            else:
                raise LexError("unterminated string literal", file, line, col(i))
            tokens.append(Token("string", source[i : j + 1], line, col(i), i))
            i = j + 1
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token("punct", op, line, col(i), i))
                i += len(op)
                break
        else:
            raise LexError(f"illegal character {ch!r}", file, line, col(i))
    return tokens
