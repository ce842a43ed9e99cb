"""Tokenizer shared by the project DSL and the class-expression parser."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import OdpSyntaxError

_IDENT = r"[A-Za-z_](?:[A-Za-z0-9_]|-(?=[A-Za-z0-9_]))*"

_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{{}}|^`\\\s]*>)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<name>{_IDENT}(?::{_IDENT})?)
  | (?P<int>[0-9]+)
  | (?P<punct>->|[{{}}\[\](),.=:;*-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # name | iri | string | int | punct | eof
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise OdpSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def unquote(literal: str) -> str:
    body = literal[1:-1]
    return re.sub(r"\\(.)", lambda m: {"n": "\n", "t": "\t"}.get(m.group(1), m.group(1)), body)


def quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, value: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind in ("punct", "name") and tok.value == value

    def accept(self, value: str) -> Token | None:
        if self.at(value):
            return self.next()
        return None

    def expect(self, value: str) -> Token:
        tok = self.peek()
        if not self.at(value):
            raise self.error(f"unexpected {describe(tok)}", repr(value))
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"unexpected {describe(tok)}", what)
        return self.next()

    def error(self, message: str, expected: str | None = None) -> OdpSyntaxError:
        tok = self.peek()
        return OdpSyntaxError(message, tok.line, tok.col, expected)


def describe(tok: Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.value)
