"""Front end of the mini-C subset: source text to typed AST."""

from __future__ import annotations

from . import ast
from .errors import (
    FrontendError,
    InvalidOperands,
    LexError,
    ParseError,
    Redeclaration,
    UndeclaredVariable,
    UnsupportedFeature,
)
from .lexer import Token, tokenize
from .parser import parse
from .printer import to_c
from .typecheck import typecheck


def load(source: str, filename: str = "<input>") -> list:
    """Typed AST of ``source``; one Function per definition."""
    return [typecheck(fn) for fn in parse(tokenize(source, filename))]


__all__ = [
    "ast", "FrontendError", "InvalidOperands", "LexError", "ParseError",
    "Redeclaration", "UndeclaredVariable", "UnsupportedFeature", "Token",
    "tokenize", "parse", "to_c", "typecheck", "load",
]
