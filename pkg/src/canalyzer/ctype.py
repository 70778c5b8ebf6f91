"""Scalar C types and the fixed machine model (ILP32-like, 64-bit long)."""

from __future__ import annotations

from dataclasses import dataclass

INTEGRAL_KINDS = ("char", "short", "int", "long", "longlong")
REAL_KINDS = ("float", "double", "longdouble")

BITS = {"char": 8, "short": 16, "int": 32, "long": 64, "longlong": 64}
# Conversion rank; long and long long share a width but not a rank.
RANK = {"char": 1, "short": 2, "int": 3, "long": 4, "longlong": 5}
REAL_RANK = {"float": 1, "double": 2, "longdouble": 3}

_SPELLING = {
    "char": "char",
    "short": "short",
    "int": "int",
    "long": "long",
    "longlong": "long long",
    "float": "float",
    "double": "double",
    "longdouble": "long double",
}


@dataclass(frozen=True)
class CType:
    kind: str
    signed: bool = True
    is_const: bool = False

    def __post_init__(self):
        if self.kind not in INTEGRAL_KINDS and self.kind not in REAL_KINDS:
            raise ValueError(f"unknown type kind {self.kind!r}")
        if self.kind in REAL_KINDS and not self.signed:
            raise ValueError("real types are always signed")

    @property
    def is_integral(self) -> bool:
        return self.kind in INTEGRAL_KINDS

    @property
    def is_real(self) -> bool:
        return self.kind in REAL_KINDS

    @property
    def bits(self) -> int:
        return BITS[self.kind]

    def range(self) -> tuple[int, int]:
        """Closed value range of an integral type."""
        if not self.is_integral:
            raise TypeError(f"{self} has no machine range")
        width = BITS[self.kind]
        if self.signed:
            return -(1 << (width - 1)), (1 << (width - 1)) - 1
        return 0, (1 << width) - 1

    def unqualified(self) -> CType:
        return CType(self.kind, self.signed) if self.is_const else self

    def same(self, other: CType) -> bool:
        return self.kind == other.kind and self.signed == other.signed

    def wrap(self, value: int) -> int:
        """Two's-complement reduction of ``value`` into this type's range."""
        lo, hi = self.range()
        span = hi - lo + 1
        return (value - lo) % span + lo

    def __str__(self) -> str:
        text = _SPELLING[self.kind]
        if self.is_integral and not self.signed:
            text = "unsigned " + text
        if self.is_const:
            text = "const " + text
        return text


CHAR = CType("char")
UCHAR = CType("char", False)
SHORT = CType("short")
USHORT = CType("short", False)
INT = CType("int")
UINT = CType("int", False)
LONG = CType("long")
ULONG = CType("long", False)
LONGLONG = CType("longlong")
ULONGLONG = CType("longlong", False)
FLOAT = CType("float")
DOUBLE = CType("double")
LONGDOUBLE = CType("longdouble")


def promote(t: CType) -> CType:
    """Integer promotion: anything narrower than int becomes int."""
    if t.is_integral and RANK[t.kind] < RANK["int"]:
        return INT
    return t.unqualified()


def common_type(a: CType, b: CType) -> CType:
    """Usual arithmetic conversions for a binary operator."""
    if a.is_real or b.is_real:
        best = max(
            (t for t in (a, b) if t.is_real), key=lambda t: REAL_RANK[t.kind]
        )
        return best.unqualified()
    a, b = promote(a), promote(b)
    if a.same(b):
        return a
    if a.signed == b.signed:
        return a if RANK[a.kind] >= RANK[b.kind] else b
    unsigned, signed = (a, b) if not a.signed else (b, a)
    if RANK[unsigned.kind] >= RANK[signed.kind]:
        return unsigned
    if BITS[signed.kind] > BITS[unsigned.kind]:
        return signed
    return CType(signed.kind, False)


def cast_kind(src: CType, dst: CType) -> str:
    if src.is_integral and dst.is_integral:
        return "IntegralCast"
    if src.is_integral:
        return "IntegralToFloating"
    if dst.is_integral:
        return "FloatingToIntegral"
    return "FloatingCast"


def value_preserving(src: CType, dst: CType) -> bool:
    """True when every value of ``src`` is representable unchanged in ``dst``."""
    if dst.is_real:
        return True
    if src.is_real:
        return False
    slo, shi = src.range()
    dlo, dhi = dst.range()
    return dlo <= slo and shi <= dhi
