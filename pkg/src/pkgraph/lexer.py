"""Token scanner shared by the Turtle and SPARQL-subset parsers.

Errors always carry line and column (1-based) so parse failures on user
input point at the offending character.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class TextSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
      (?P<WS>[ \t\r\n]+)
    | (?P<COMMENT>\#[^\n]*)
    | (?P<ATPREFIX>@prefix\b)
    | (?P<IRIREF><[^<>"{}|^`\\\x00-\x20]*>)
    | (?P<STRING>"(?:[^"\\\n\r]|\\.)*")
    | (?P<VAR>\?[A-Za-z_][A-Za-z0-9_]*)
    | (?P<LANGTAG>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
    | (?P<HATHAT>\^\^)
    | (?P<PNAME>(?:[A-Za-z_][A-Za-z0-9_\-]*)?:(?:[A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?)?)
    | (?P<WORD>[A-Za-z][A-Za-z0-9_]*)
    | (?P<PUNCT>[.;,{}()=])
    """,
    re.VERBOSE,
)

_PUNCT_KINDS = {
    ".": "DOT",
    ";": "SEMI",
    ",": "COMMA",
    "{": "LBRACE",
    "}": "RBRACE",
    "(": "LPAREN",
    ")": "RPAREN",
    "=": "EQ",
}

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


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    last_nl = text.rfind("\n", 0, offset)
    return line, offset - last_nl


def unescape_string(raw: str, text: str, offset: int) -> str:
    """Decode the body of a quoted string token (quotes already stripped)."""
    out = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(raw):
            raise TextSyntaxError("dangling escape in string", *_position(text, offset + i))
        esc = raw[i + 1]
        if esc in _STRING_ESCAPES:
            out.append(_STRING_ESCAPES[esc])
            i += 2
        elif esc in ("u", "U"):
            width = 4 if esc == "u" else 8
            hexpart = raw[i + 2 : i + 2 + width]
            if len(hexpart) != width or not re.fullmatch(r"[0-9A-Fa-f]+", hexpart):
                raise TextSyntaxError("bad unicode escape", *_position(text, offset + i))
            code = int(hexpart, 16)
            if code > 0x10FFFF:
                raise TextSyntaxError("unicode escape out of range", *_position(text, offset + i))
            out.append(chr(code))
            i += 2 + width
        else:
            raise TextSyntaxError(f"unknown escape \\{esc}", *_position(text, offset + i))
    return "".join(out)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise TextSyntaxError(f"unexpected character {text[pos]!r}", *_position(text, pos))
        kind = m.lastgroup or ""
        value = m.group()
        if kind not in ("WS", "COMMENT"):
            line, column = _position(text, pos)
            if kind == "PUNCT":
                kind = _PUNCT_KINDS[value]
            elif kind == "STRING":
                value = unescape_string(value[1:-1], text, pos + 1)
            elif kind == "IRIREF":
                value = value[1:-1]
            tokens.append(Token(kind, value, line, column))
        pos = m.end()
    line, column = _position(text, len(text))
    tokens.append(Token("EOF", "", line, column))
    return tokens


class TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def next(self) -> Token:
        token = self.tokens[self.index]
        if token.kind != "EOF":
            self.index += 1
        return token

    def expect(self, kind: str, what: str | None = None) -> Token:
        token = self.peek()
        if token.kind != kind:
            expected = what or kind
            raise TextSyntaxError(
                f"expected {expected}, found {token.value!r}", token.line, token.column
            )
        return self.next()

    def at_keyword(self, *words: str) -> bool:
        token = self.peek()
        return token.kind == "WORD" and token.value.upper() in words

    def expect_keyword(self, word: str) -> Token:
        token = self.peek()
        if token.kind != "WORD" or token.value.upper() != word:
            raise TextSyntaxError(f"expected {word}", token.line, token.column)
        return self.next()

    def error(self, message: str) -> TextSyntaxError:
        token = self.peek()
        return TextSyntaxError(message, token.line, token.column)
