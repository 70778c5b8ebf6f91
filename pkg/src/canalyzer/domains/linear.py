"""Linear forms and interval propagation of relational conditions."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from ..ctype import value_preserving
from ..frontend import ast
from . import arith
from . import bounds as B
from .bounds import INF, NEG_INF

NEGATE = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "==": "!=", "!=": "=="}


def linearize(e) -> Optional[tuple]:
    """``(coeffs, const)`` with sum(coeffs[v] * v) + const == e, or None.

    Only meaningful when evaluating ``e`` raises no overflow, since the
    form describes mathematical rather than machine arithmetic.
    """
    if isinstance(e, (ast.IntLit, ast.RealLit)):
        return {}, Fraction(e.value)
    if isinstance(e, ast.VarRef):
        return {e.name: Fraction(1)}, Fraction(0)
    if isinstance(e, ast.Cast):
        src = e.operand.type
        if e.kind == "FloatingToIntegral" or src is None or not value_preserving(src, e.to):
            return None
        return linearize(e.operand)
    if isinstance(e, ast.Unary) and e.op in ("+", "-"):
        inner = linearize(e.operand)
        if inner is None or e.op == "+":
            return inner
        return scale(inner, -1)
    if isinstance(e, ast.Binary) and e.op in ("+", "-", "*"):
        a, b = linearize(e.lhs), linearize(e.rhs)
        if a is None or b is None:
            return None
        if e.op == "+":
            return combine(a, b, 1)
        if e.op == "-":
            return combine(a, b, -1)
        if not a[0]:
            return scale(b, a[1])
        if not b[0]:
            return scale(a, b[1])
    return None


def scale(form, k):
    coeffs, const = form
    return {v: c * k for v, c in coeffs.items() if c * k != 0}, const * k


def combine(a, b, sign):
    coeffs = dict(a[0])
    for v, c in b[0].items():
        coeffs[v] = coeffs.get(v, 0) + sign * c
    return {v: c for v, c in coeffs.items() if c != 0}, a[1] + sign * b[1]


def condition_forms(cond, polarity: bool, types) -> Optional[list]:
    """Rewrite a relational atom as a list of ``(coeffs, const)`` with each
    form meaning ``sum + const <= 0``; ``!=`` comes back as ("ne", form).

    Returns None when the atom is not linear.  ``types`` maps a variable to
    its CType and decides whether strict inequalities can be tightened.
    """
    if not isinstance(cond, ast.Binary) or cond.op not in ast.REL_OPS:
        return None
    op = cond.op if polarity else NEGATE[cond.op]
    lhs, rhs = linearize(cond.lhs), linearize(cond.rhs)
    if lhs is None or rhs is None:
        return None
    e = combine(lhs, rhs, -1)  # lhs - rhs  op  0
    if op in (">", ">="):
        e = scale(e, -1)
        op = "<" if op == ">" else "<="
    if op == "==":
        return [e, scale(e, -1)]
    if op == "!=":
        return [("ne", e)]
    if op == "<":
        scaled = _integral_scaled(e, types)
        if scaled is not None:
            return [(scaled[0], scaled[1] + 1)]
        # strictness over the reals is dropped, which only loses precision
    return [e]


def _integral_scaled(form, types):
    """Scale an all-integral form to integer coefficients, else None.

    For such a form ``f < 0`` is the same as ``f + 1 <= 0``.
    """
    coeffs, const = form
    if not all(types(v).is_integral for v in coeffs):
        return None
    den = 1
    for c in list(coeffs.values()) + [const]:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    return scale(form, den)


def _term_min(k, r):
    return min(B.mul(k, r[0]), B.mul(k, r[1]))


def _tighten_le(box: dict, coeffs: dict, const, types) -> bool:
    """Propagate ``sum + const <= 0`` into ``box``; False on emptiness."""
    mins = {v: _term_min(k, box[v]) for v, k in coeffs.items()}
    total = sum(mins.values())
    if total + const > 0:
        return False
    for v, k in coeffs.items():
        rest = total - mins[v] if B.is_finite(mins[v]) else sum(
            m for w, m in mins.items() if w != v)
        if rest == NEG_INF:
            continue
        bound = B.div(-const - rest, k)
        lo, hi = box[v]
        integral = types(v).is_integral
        if k > 0:
            hi = min(hi, B.floor(bound) if integral else bound)
        else:
            lo = max(lo, B.ceil(bound) if integral else bound)
        if lo > hi:
            return False
        box[v] = (B.norm(lo), B.norm(hi))
    return True


def refine_box(cond, polarity: bool, box: dict, types, rounds: int = 2) -> Optional[dict]:
    """Meet the per-variable ``box`` with ``cond`` (or its negation).

    ``box`` holds an interval for every variable of the state.  Returns the
    refined box, or None if no point can satisfy the condition.
    """
    lookup = box.__getitem__
    value, clean = arith.evaluate_unwrapped(cond, lookup)
    outcome = arith.truth(value)
    if outcome is (not polarity):
        return None
    if outcome is polarity or not clean:
        return dict(box)
    forms = condition_forms(cond, polarity, types)
    if forms is None:
        return dict(box)
    box = dict(box)
    for _ in range(rounds):
        for f in forms:
            if f[0] == "ne":
                if not _exclude_point(box, f[1], types):
                    return None
            elif not _tighten_le(box, f[0], f[1], types):
                return None
    return box


def _exclude_point(box, form, types) -> bool:
    coeffs, const = form
    if len(coeffs) != 1:
        return True
    (v, k), = coeffs.items()
    point = -const / k
    lo, hi = box[v]
    if lo == hi == point:
        return False
    if types(v).is_integral:
        if lo == point:
            box[v] = (B.norm(lo + 1), hi)
        elif hi == point:
            box[v] = (lo, B.norm(hi - 1))
    return True
