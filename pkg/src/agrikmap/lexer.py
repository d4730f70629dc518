"""Shared tokenizer for the Turtle subset and the query language.

Both grammars draw from the same token pool (IRI references, prefixed names,
string/number literals, punctuation); each parser rejects the tokens it has no
use for. Line and column numbers are 1-based and point at the first character
of the token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseIssue

# Token kinds
IRIREF = "IRIREF"
PNAME = "PNAME"  # value: (prefix_label, local) -- local may be ""
BNODE = "BNODE"
VAR = "VAR"
STRING = "STRING"
NUMBER = "NUMBER"  # value: (lexical, "integer" | "decimal")
WORD = "WORD"  # bare identifier: keywords and the 'a' shorthand
ATWORD = "ATWORD"  # @prefix, @base, @en, @en-GB ...
PUNCT = "PUNCT"  # . ; , { } * ( ) [ ] ^^
EOF = "EOF"

_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PNAME_RE = re.compile(r"(?:[A-Za-z][A-Za-z0-9_]*)?:(?:[A-Za-z_][A-Za-z0-9_]*)?")
_NUMBER_RE = re.compile(r"[+-]?[0-9]+(?:\.[0-9]+)?")
_ATWORD_RE = re.compile(r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*")
_VAR_RE = re.compile(r"\?[A-Za-z][A-Za-z0-9_]*")
_BNODE_RE = re.compile(r"_:[A-Za-z][A-Za-z0-9_]*")

_STRING_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


@dataclass(frozen=True)
class Token:
    kind: str
    value: object
    line: int
    col: int


class _Scanner:
    def __init__(self, text: str, error_cls: type[ParseIssue]):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.error_cls = error_cls

    def fail(self, message: str, line: int | None = None, col: int | None = None):
        raise self.error_cls(line or self.line, col or self.col, message)

    def advance(self, n: int):
        chunk = self.text[self.pos : self.pos + n]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.col = n - chunk.rindex("\n")
        else:
            self.col += n
        self.pos += n

    def skip_space_and_comments(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self.advance(1)
            elif ch == "#":
                end = self.text.find("\n", self.pos)
                self.advance(len(self.text) - self.pos if end < 0 else end - self.pos)
            else:
                return

    def read_iriref(self) -> Token:
        line, col = self.line, self.col
        end = self.pos + 1
        while end < len(self.text):
            ch = self.text[end]
            if ch == ">":
                break
            if ch in "<\n\r \t":
                self.fail("invalid character inside IRI reference", line, col)
            end += 1
        else:
            self.fail("unterminated IRI reference", line, col)
        value = self.text[self.pos + 1 : end]
        self.advance(end + 1 - self.pos)
        return Token(IRIREF, value, line, col)

    def read_string(self) -> Token:
        line, col = self.line, self.col
        if self.text.startswith('"""', self.pos):
            self.fail("long (triple-quoted) string literals are not supported", line, col)
        out: list[str] = []
        i = self.pos + 1
        while i < len(self.text):
            ch = self.text[i]
            if ch == '"':
                value = "".join(out)
                self.advance(i + 1 - self.pos)
                return Token(STRING, value, line, col)
            if ch in "\n\r":
                self.fail("newline inside string literal", line, col)
            if ch == "\\":
                if i + 1 >= len(self.text):
                    self.fail("unterminated escape sequence", line, col)
                esc = self.text[i + 1]
                if esc in _STRING_ESCAPES:
                    out.append(_STRING_ESCAPES[esc])
                    i += 2
                elif esc in "uU":
                    width = 4 if esc == "u" else 8
                    hexpart = self.text[i + 2 : i + 2 + width]
                    if len(hexpart) != width or any(c not in "0123456789abcdefABCDEF" for c in hexpart):
                        self.fail(f"malformed \\{esc} escape", line, col)
                    code = int(hexpart, 16)
                    if code > 0x10FFFF or 0xD800 <= code <= 0xDFFF:
                        self.fail("escape is not a valid unicode scalar", line, col)
                    out.append(chr(code))
                    i += 2 + width
                else:
                    self.fail(f"unknown escape sequence \\{esc}", line, col)
            else:
                out.append(ch)
                i += 1
        self.fail("unterminated string literal", line, col)


def tokenize(text: str, error_cls: type[ParseIssue]) -> list[Token]:
    """Split text into tokens, raising error_cls on anything unrecognisable."""
    sc = _Scanner(text, error_cls)
    tokens: list[Token] = []
    while True:
        sc.skip_space_and_comments()
        if sc.pos >= len(sc.text):
            tokens.append(Token(EOF, None, sc.line, sc.col))
            return tokens
        line, col = sc.line, sc.col
        ch = sc.text[sc.pos]
        if ch == "<":
            tokens.append(sc.read_iriref())
        elif ch == '"':
            tokens.append(sc.read_string())
        elif ch == "'":
            sc.fail("single-quoted string literals are not supported")
        elif ch == "^":
            if sc.text.startswith("^^", sc.pos):
                sc.advance(2)
                tokens.append(Token(PUNCT, "^^", line, col))
            else:
                sc.fail("stray '^'")
        elif ch in ".;,{}*()[]":
            sc.advance(1)
            tokens.append(Token(PUNCT, ch, line, col))
        elif ch == "@":
            m = _ATWORD_RE.match(sc.text, sc.pos)
            if not m:
                sc.fail("malformed @-word")
            sc.advance(m.end() - sc.pos)
            tokens.append(Token(ATWORD, m.group()[1:], line, col))
        elif ch == "?":
            m = _VAR_RE.match(sc.text, sc.pos)
            if not m:
                sc.fail("malformed variable name")
            sc.advance(m.end() - sc.pos)
            tokens.append(Token(VAR, m.group()[1:], line, col))
        elif ch == "_":
            m = _BNODE_RE.match(sc.text, sc.pos)
            if not m:
                sc.fail("malformed blank node label")
            sc.advance(m.end() - sc.pos)
            tokens.append(Token(BNODE, m.group()[2:], line, col))
        elif ch in "+-0123456789":
            m = _NUMBER_RE.match(sc.text, sc.pos)
            if not m:
                sc.fail("malformed numeric literal")
            lexical = m.group()
            kind = "decimal" if "." in lexical else "integer"
            sc.advance(m.end() - sc.pos)
            tokens.append(Token(NUMBER, (lexical, kind), line, col))
        else:
            m = _PNAME_RE.match(sc.text, sc.pos)
            if m and ":" in m.group():
                label, local = m.group().split(":", 1)
                sc.advance(m.end() - sc.pos)
                tokens.append(Token(PNAME, (label, local), line, col))
                continue
            m = _WORD_RE.match(sc.text, sc.pos)
            if m:
                sc.advance(m.end() - sc.pos)
                tokens.append(Token(WORD, m.group(), line, col))
                continue
            sc.fail(f"unexpected character {ch!r}")
