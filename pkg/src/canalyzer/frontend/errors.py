from __future__ import annotations


class FrontendError(Exception):
    """Base class for every error raised while reading a source file."""

    def __init__(self, loc, message: str):
        super().__init__(f"{loc}: {message}")
        self.loc = loc
        self.message = message


class LexError(FrontendError):
    pass


class ParseError(FrontendError):
    def __init__(self, loc, expected: str, found: str):
        super().__init__(loc, f"expected {expected}, found {found}")
        self.expected = expected
        self.found = found


class UnsupportedFeature(FrontendError):
    def __init__(self, loc, name: str):
        super().__init__(loc, f"unsupported feature: {name}")
        self.name = name


class UndeclaredVariable(FrontendError):
    def __init__(self, loc, name: str):
        super().__init__(loc, f"use of undeclared variable '{name}'")
        self.name = name


class Redeclaration(FrontendError):
    def __init__(self, loc, name: str):
        super().__init__(loc, f"redeclaration of '{name}'")
        self.name = name


class InvalidOperands(FrontendError):
    pass
