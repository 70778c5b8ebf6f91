"""Tokenizer for the mini-C subset."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .. import ctype
from ..ctype import CType
from .ast import SourceLoc
from .errors import LexError

KEYWORDS = {
    "int", "char", "short", "long", "signed", "unsigned", "float", "double",
    "const", "void", "if", "else", "while", "do", "for", "break", "continue",
    "goto", "return", "switch", "case", "default",
    # recognised only so the parser can reject them by name
    "struct", "union", "enum", "typedef", "sizeof", "static", "extern",
    "volatile", "register", "auto", "_Bool",
}

# longest first so that maximal munch works with a simple scan
PUNCTUATORS = sorted(
    """<<= >>= ... -> ++ -- << >> <= >= == != && || += -= *= /= %= &= |= ^=
    + - * / % < > = ! ~ & | ^ ? : ; , ( ) { } [ ] .""".split(),
    key=len,
    reverse=True,
)

_IDENT = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_REAL = re.compile(
    r"(?:(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)([fFlL]?)"
)
_INT = re.compile(r"(0[xX][0-9a-fA-F]+|0[0-7]*|[1-9]\d*)([uUlL]*)")


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, int, real, punct, eof
    text: str
    loc: SourceLoc
    value: Optional[Union[int, Fraction]] = None
    ctype: Optional[CType] = None

    def __str__(self) -> str:
        if self.kind == "eof":
            return "end of input"
        return f"'{self.text}'"


def _int_type(value: int, suffix: str, decimal: bool, loc) -> CType:
    s = suffix.lower()
    if s not in ("", "u", "l", "ul", "lu", "ll", "ull", "llu"):
        raise LexError(loc, f"malformed integer suffix '{suffix}'")
    unsigned = "u" in s
    longs = s.count("l")
    kinds = ["int", "long", "longlong"][min(longs, 2):]
    candidates = []
    for kind in kinds:
        if unsigned:
            candidates.append(CType(kind, False))
        else:
            candidates.append(CType(kind))
            if not decimal:
                candidates.append(CType(kind, False))
    for t in candidates:
        lo, hi = t.range()
        if lo <= value <= hi:
            return t
    raise LexError(loc, f"integer literal {value} is too large")


def tokenize(source: str, filename: str = "<input>") -> list[Token]:
    tokens = []
    pos = 0
    line, col = 1, 1
    n = len(source)

    def advance(count):
        nonlocal pos, line, col
        for ch in source[pos:pos + count]:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        pos += count

    while pos < n:
        ch = source[pos]
        if ch in " \t\r\n\f\v":
            advance(1)
            continue
        if source.startswith("//", pos):
            end = source.find("\n", pos)
            advance((n if end < 0 else end) - pos)
            continue
        if source.startswith("/*", pos):
            end = source.find("*/", pos + 2)
            if end < 0:
                raise LexError(SourceLoc(filename, line, col), "unterminated comment")
            advance(end + 2 - pos)
            continue
        loc = SourceLoc(filename, line, col)
        if ch == "#":
            raise LexError(loc, "preprocessor directives are not supported")
        if ch in "\"":
            raise LexError(loc, "string literals are not supported")
        if ch == "'":
            m = re.match(r"'(\\.|[^\\'\n])'", source[pos:])
            if not m:
                raise LexError(loc, "malformed character literal")
            body = m.group(1)
            escapes = {"n": 10, "t": 9, "0": 0, "r": 13, "\\": 92, "'": 39, '"': 34}
            if body.startswith("\\"):
                if body[1] not in escapes:
                    raise LexError(loc, f"unknown escape '{body}'")
                value = escapes[body[1]]
            else:
                value = ord(body)
            tokens.append(Token("int", m.group(0), loc, value, ctype.INT))
            advance(len(m.group(0)))
            continue
        if ch.isdigit() or (ch == "." and pos + 1 < n and source[pos + 1].isdigit()):
            m = _REAL.match(source, pos)
            if m:
                text = m.group(0)
                suffix = m.group(1)
                body = text[: len(text) - len(suffix)] if suffix else text
                value = Fraction(body)
                kind = {"": ctype.DOUBLE, "f": ctype.FLOAT, "l": ctype.LONGDOUBLE}[
                    suffix.lower()
                ]
                end = m.end()
            else:
                m = _INT.match(source, pos)
                text, suffix = m.group(0), m.group(2)
                digits = m.group(1)
                if digits.lower().startswith("0x"):
                    value, decimal = int(digits, 16), False
                elif len(digits) > 1 and digits.startswith("0"):
                    value, decimal = int(digits, 8), False
                else:
                    value, decimal = int(digits), True
                kind = _int_type(value, suffix, decimal, loc)
                end = m.end()
            if end < n and (source[end].isalnum() or source[end] in "_.$"):
                raise LexError(loc, f"malformed number '{source[pos:end + 1]}'")
            tokens.append(Token("real" if kind.is_real else "int", text, loc, value, kind))
            advance(end - pos)
            continue
        m = _IDENT.match(source, pos)
        if m:
            text = m.group(0)
            tokens.append(Token("keyword" if text in KEYWORDS else "ident", text, loc))
            advance(len(text))
            continue
        for p in PUNCTUATORS:
            if source.startswith(p, pos):
                tokens.append(Token("punct", p, loc))
                advance(len(p))
                break
        else:
            raise LexError(loc, f"illegal character {ch!r}")
    tokens.append(Token("eof", "", SourceLoc(filename, line, col)))
    return tokens
