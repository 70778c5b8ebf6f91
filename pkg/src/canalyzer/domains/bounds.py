"""Extended-rational bounds.

Finite bounds are ``int`` or ``Fraction``; infinities are the float
infinities, which compare correctly against both.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = float("inf")
NEG_INF = -INF


def is_finite(b) -> bool:
    return b != INF and b != NEG_INF


def norm(b):
    """Canonical form: integral Fractions become ints."""
    if isinstance(b, Fraction) and b.denominator == 1:
        return int(b)
    return b


def mul(a, b):
    # 0 * oo = 0, the usual interval-arithmetic convention
    if a == 0 or b == 0:
        return 0
    return norm(a * b)


def div(a, b):
    """a / b for b != 0; either side may be infinite."""
    if not is_finite(b):
        if not is_finite(a):
            # only reached as a corner of unbounded boxes, where the
            # quotient is unbounded in the direction of the signs
            return INF if (a > 0) == (b > 0) else NEG_INF
        return 0
    if not is_finite(a):
        return a if b > 0 else -a
    return norm(Fraction(a) / b)


def floor(b):
    return b if not is_finite(b) else math.floor(b)


def ceil(b):
    return b if not is_finite(b) else math.ceil(b)


def trunc(b):
    return b if not is_finite(b) else math.trunc(b)


def fmt(b) -> str:
    if b == INF:
        return "+oo"
    if b == NEG_INF:
        return "-oo"
    return str(norm(b))


def to_json(b):
    if b == INF:
        return "+oo"
    if b == NEG_INF:
        return "-oo"
    b = norm(b)
    return b if isinstance(b, int) else str(b)
