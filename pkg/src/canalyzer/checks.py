"""Implicit checks and explicit assertion verdicts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ctype import CType
from .domains import arith
from .frontend import ast
from .frontend.printer import to_c

KINDS = ("DivByZero", "ModByZero", "Overflow", "UninitializedUse", "ShiftUnsupported")
SEVERITIES = ("definite", "possible")


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    severity: str
    loc: ast.SourceLoc
    message: str
    variable: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown diagnostic kind {self.kind!r}")
        if self.severity not in SEVERITIES:
            raise ValueError(f"unknown severity {self.severity!r}")

    def __str__(self) -> str:
        return f"{self.loc}: {self.severity} {self.kind}: {self.message}"


@dataclass(frozen=True)
class Verdict:
    assertion_loc: ast.SourceLoc
    condition: str
    result: str  # see check_assert
    state_at: str
    note: Optional[str] = None

    def __str__(self) -> str:
        text = f"{self.assertion_loc}: MYASSERT({self.condition}) {self.result}"
        return text + (f" ({self.note})" if self.note else "")


def from_event(ev: arith.Event) -> Diagnostic:
    return Diagnostic(ev.kind, ev.severity, ev.loc, ev.message, ev.variable)


def _lookup(domain, state):
    return lambda name: domain.project(state, name)


def check_division(domain, state, divisor, loc) -> Optional[Diagnostic]:
    """Zero test on a divisor; None when the divisor cannot be zero."""
    if domain.is_bottom(state):
        return None
    r = arith.evaluate(divisor, _lookup(domain, state))
    if not arith.contains_zero(r):
        return None
    text = to_c(divisor)
    if r == (0, 0):
        return Diagnostic("DivByZero", "definite", loc, f"divisor '{text}' is zero")
    return Diagnostic("DivByZero", "possible", loc,
                      f"divisor '{text}' in {arith.fmt(r)} may be zero")


def check_overflow(domain, state, result_expr, target_type: CType, loc) -> Optional[Diagnostic]:
    """Range test of an arithmetic result against an integral type."""
    if domain.is_bottom(state) or not target_type.is_integral:
        return None
    r = arith.Evaluator(_lookup(domain, state)).unclipped(result_expr)
    if arith.fits(r, target_type):
        return None
    tr = arith.type_range(target_type)
    severity = "definite" if arith.meet(r, tr) is None else "possible"
    return Diagnostic("Overflow", severity, loc,
                      f"result of '{to_c(result_expr)}' in {arith.fmt(r)} exceeds "
                      f"the range of {target_type} {arith.fmt(tr)}")


def check_uninitialized(flags, expr, loc) -> list:
    """One diagnostic per variable read while not definitely initialized."""
    out = []
    for name in sorted(ast.reads(expr)):
        if name in flags.must:
            continue
        severity = "possible" if name in flags.may else "definite"
        what = "may be used" if severity == "possible" else "is used"
        out.append(Diagnostic("UninitializedUse", severity, loc,
                              f"variable '{name}' {what} uninitialized", name))
    return out


def check_assert(domain, state, cond, loc) -> Verdict:
    """Proven when the negated condition is unsatisfiable, violated when the
    condition itself is, unknown otherwise."""
    text = to_c(cond)
    rendered = domain.render(state)
    if domain.is_bottom(state):
        return Verdict(loc, text, "proven", rendered, "vacuous (unreachable)")
    if domain.is_bottom(domain.assume(state, cond, False)):
        return Verdict(loc, text, "proven", rendered)
    if domain.is_bottom(domain.assume(state, cond, True)):
        return Verdict(loc, text, "violated", rendered)
    return Verdict(loc, text, "unknown", rendered)


def sort_key(d: Diagnostic, order: int = 0):
    return (order, d.loc.line, d.loc.column, KINDS.index(d.kind), d.message)
