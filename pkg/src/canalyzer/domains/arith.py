"""Interval evaluation of typed expressions.

Every domain evaluates right-hand sides through this module, using its
own per-variable projection as the leaf lookup.  Evaluation also reports
the events that the implicit checks turn into diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from ..ctype import CType
from ..frontend import ast
from ..frontend.printer import to_c
from . import bounds as B
from .bounds import INF, NEG_INF

TOP = (NEG_INF, INF)


@dataclass(frozen=True)
class Event:
    kind: str  # DivByZero, ModByZero, Overflow, ShiftUnsupported
    severity: str  # definite or possible
    loc: object
    message: str
    variable: Optional[str] = None


def type_range(t: CType):
    return t.range() if t is not None and t.is_integral else TOP


def meet(a, b):
    lo, hi = max(a[0], b[0]), min(a[1], b[1])
    return None if lo > hi else (lo, hi)


def join(a, b):
    return (min(a[0], b[0]), max(a[1], b[1]))


def contains_zero(r) -> bool:
    return r[0] <= 0 <= r[1]


def fits(r, t: CType) -> bool:
    lo, hi = type_range(t)
    return lo <= r[0] and r[1] <= hi


def fmt(r) -> str:
    return f"[{B.fmt(r[0])},{B.fmt(r[1])}]"


def truth(r):
    """Truth value of a scalar used as a condition; None when undecided."""
    if r == (0, 0):
        return False
    if not contains_zero(r):
        return True
    return None


def _bool(v):
    return (0, 1) if v is None else ((1, 1) if v else (0, 0))


def compare(op: str, a, b):
    """Decide ``a op b`` over intervals, or None when both outcomes occur."""
    if op == "<":
        return True if a[1] < b[0] else False if a[0] >= b[1] else None
    if op == "<=":
        return True if a[1] <= b[0] else False if a[0] > b[1] else None
    if op == ">":
        return compare("<", b, a)
    if op == ">=":
        return compare("<=", b, a)
    if op == "==":
        if a[0] == a[1] == b[0] == b[1]:
            return True
        return False if meet(a, b) is None else None
    if op == "!=":
        v = compare("==", a, b)
        return None if v is None else not v
    raise ValueError(op)


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def sub(a, b):
    return (a[0] - b[1], a[1] - b[0])


def mul(a, b):
    corners = [B.mul(x, y) for x in a for y in b]
    return (min(corners), max(corners))


def div(a, b, integral: bool):
    """Quotient for a divisor interval that excludes zero."""
    corners = [B.div(x, y) for x in a for y in b]
    if integral:
        corners = [B.trunc(c) for c in corners]
    return (B.norm(min(corners)), B.norm(max(corners)))


def mod(a, b):
    """C remainder for a divisor interval that excludes zero."""
    m = max(abs(b[0]), abs(b[1])) - 1
    least = min(abs(b[0]), abs(b[1]))
    if -least < a[0] and a[1] < least:
        return a  # |a| < |b| everywhere, so a % b == a
    lo = 0 if a[0] >= 0 else max(a[0], -m)
    hi = 0 if a[1] <= 0 else min(a[1], m)
    return (lo, hi)


class Evaluator:
    def __init__(self, lookup: Callable, sink: Optional[list] = None):
        self.lookup = lookup
        self.sink = sink
        self.clean = True  # no event was raised
        # a value may have wrapped in a way C defines (unsigned arithmetic,
        # integral conversions); signed overflow is undefined and not counted
        self.wrapped = False

    def emit(self, kind, severity, loc, message, variable=None):
        self.clean = False
        if self.sink is not None:
            self.sink.append(Event(kind, severity, loc, message, variable))

    def range_check(self, r, t: CType, loc, what: str, conversion: bool = False):
        """Clip an integral result to its type, reporting overflow."""
        if t is None or not t.is_integral or fits(r, t):
            return r
        if conversion or not t.signed:
            self.wrapped = True
        tr = type_range(t)
        severity = "definite" if meet(r, tr) is None else "possible"
        self.emit("Overflow", severity, loc,
                  f"{what} in {fmt(r)} exceeds the range of {t} {fmt(tr)}")
        return tr

    def eval(self, e):
        if isinstance(e, (ast.IntLit, ast.RealLit)):
            v = B.norm(e.value)
            return (v, v)
        if isinstance(e, ast.VarRef):
            r = self.lookup(e.name)
            if e.type is not None and e.type.is_integral:
                r = meet(r, type_range(e.type)) or r
            return r
        if isinstance(e, ast.Cast):
            r = self.eval(e.operand)
            if e.kind == "FloatingToIntegral":
                r = (B.trunc(r[0]), B.trunc(r[1]))
            if e.to.is_integral:
                return self.range_check(r, e.to, e.loc, f"conversion of '{to_c(e.operand)}'",
                                        conversion=True)
            return r
        if isinstance(e, ast.Unary):
            if e.op in ast.INC_OPS:
                raise TypeError("increment operators must be lowered before evaluation")
            r = self.eval(e.operand)
            if e.op == "!":
                v = truth(r)
                return _bool(None if v is None else not v)
            if e.op == "-":
                r = (-r[1], -r[0])
                return self.range_check(r, e.type, e.loc, f"'{to_c(e)}'")
            return r
        if isinstance(e, ast.Binary):
            return self.binary(e)
        if isinstance(e, ast.Logical):
            a = truth(self.eval(e.lhs))
            if e.op == "&&" and a is False:
                return (0, 0)
            if e.op == "||" and a is True:
                return (1, 1)
            b = truth(self.eval(e.rhs))
            if e.op == "&&":
                v = False if b is False else (True if a and b else None)
            else:
                v = True if b is True else (False if a is False and b is False else None)
            return _bool(v)
        if isinstance(e, ast.Conditional):
            c = truth(self.eval(e.cond))
            if c is True:
                return self.eval(e.then)
            if c is False:
                return self.eval(e.other)
            return join(self.eval(e.then), self.eval(e.other))
        raise TypeError(f"cannot evaluate {type(e).__name__} abstractly")

    def binary(self, e: ast.Binary):
        if e.op in ast.REL_OPS:
            return _bool(compare(e.op, self.eval(e.lhs), self.eval(e.rhs)))
        if e.op in ast.SHIFT_OPS:
            self.eval(e.lhs), self.eval(e.rhs)
            self.emit("ShiftUnsupported", "possible", e.loc,
                      f"shift '{to_c(e)}' is not modelled; result set to the range of {e.type}")
            return type_range(e.type)
        r = self.unclipped(e)
        if r is TOP and e.op in ("/", "%"):
            return r  # trapping division: reported already, value unconstrained
        return self.range_check(r, e.type, e.loc, f"result of '{to_c(e)}'")

    def unclipped(self, e):
        """Mathematical result of an arithmetic node before the range check."""
        if isinstance(e, ast.Unary) and e.op == "-":
            r = self.eval(e.operand)
            return (-r[1], -r[0])
        if not isinstance(e, ast.Binary) or e.op not in ast.ARITH_OPS:
            return self.eval(e)
        a, b = self.eval(e.lhs), self.eval(e.rhs)
        t = e.type
        integral = t is not None and t.is_integral
        if e.op in ("/", "%"):
            if contains_zero(b):
                kind = "DivByZero" if e.op == "/" else "ModByZero"
                severity = "definite" if b == (0, 0) else "possible"
                self.emit(kind, severity, e.loc,
                          f"divisor '{to_c(e.rhs)}' in {fmt(b)} may be zero"
                          if severity == "possible" else f"divisor '{to_c(e.rhs)}' is zero")
                return TOP
            r = div(a, b, integral) if e.op == "/" else mod(a, b)
        elif e.op == "+":
            r = add(a, b)
        elif e.op == "-":
            r = sub(a, b)
        elif e.op == "*":
            r = mul(a, b)
        else:
            raise ValueError(f"unknown operator {e.op}")
        return r


def evaluate(expr, lookup: Callable, sink: Optional[list] = None):
    """Interval of ``expr`` given per-variable intervals from ``lookup``."""
    return Evaluator(lookup, sink).eval(expr)


def evaluate_clean(expr, lookup: Callable):
    """(interval, no_event) pair; a clean evaluation matches exact arithmetic."""
    ev = Evaluator(lookup)
    r = ev.eval(expr)
    return r, ev.clean


def evaluate_unwrapped(expr, lookup: Callable):
    """(interval, exact) where exact means no defined wrap-around can occur.

    Executions with signed overflow are undefined, so exact arithmetic may
    be assumed for them when refining conditions.
    """
    ev = Evaluator(lookup)
    r = ev.eval(expr)
    return r, not ev.wrapped
