"""Sign domain: each variable maps to a subset of {-, 0, +}.

The eight subsets form a finite lattice under inclusion, so widening is
just join.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..ctype import value_preserving
from ..frontend import ast
from . import arith
from .base import Domain, VarEnv
from .bounds import INF, NEG_INF
from .linear import NEGATE, combine, linearize, refine_box

NEG, ZERO, POS = "-", "0", "+"
ALL = frozenset((NEG, ZERO, POS))
NONE = frozenset()

NAMES = {
    frozenset((NEG,)): "<0",
    frozenset((ZERO,)): "=0",
    frozenset((POS,)): ">0",
    frozenset((NEG, ZERO)): "<=0",
    frozenset((ZERO, POS)): ">=0",
    frozenset((NEG, POS)): "!=0",
    ALL: "top",
}

# signs satisfying "v op 0"
OP_SIGNS = {
    "<": frozenset((NEG,)),
    "<=": frozenset((NEG, ZERO)),
    ">": frozenset((POS,)),
    ">=": frozenset((ZERO, POS)),
    "==": frozenset((ZERO,)),
    "!=": frozenset((NEG, POS)),
}
FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "==": "==", "!=": "!="}


def sign_of(v) -> str:
    return NEG if v < 0 else ZERO if v == 0 else POS


def alpha_range(r) -> frozenset:
    lo, hi = r
    out = set()
    if lo < 0:
        out.add(NEG)
    if lo <= 0 <= hi:
        out.add(ZERO)
    if hi > 0:
        out.add(POS)
    return frozenset(out)


def _neg(s):
    return frozenset({NEG: POS, POS: NEG, ZERO: ZERO}[x] for x in s)


def _lift(table, a, b):
    out = set()
    for x in a:
        for y in b:
            out |= table(x, y)
    return frozenset(out)


def _add(x, y):
    if x == ZERO:
        return {y}
    if y == ZERO or x == y:
        return {x}
    return set(ALL)


def _mul(x, y):
    if ZERO in (x, y):
        return {ZERO}
    return {POS if x == y else NEG}


def _div_trunc(x, y):
    if y == ZERO:
        return set()  # trapping; the interval side reports it
    if x == ZERO:
        return {ZERO}
    return {ZERO, POS if x == y else NEG}


def _div_real(x, y):
    return set() if y == ZERO else _mul(x, y)


def _mod(x, y):
    if y == ZERO:
        return set()
    return {ZERO} if x == ZERO else {ZERO, x}


def _signs(e, lookup) -> frozenset:
    """Sign-table evaluation; assumes no machine overflow occurs."""
    if isinstance(e, (ast.IntLit, ast.RealLit)):
        return frozenset((sign_of(e.value),))
    if isinstance(e, ast.VarRef):
        return lookup(e.name)
    if isinstance(e, ast.Cast):
        s = _signs(e.operand, lookup)
        if e.kind == "FloatingToIntegral":
            return frozenset(x for v in s for x in ((v, ZERO) if v != ZERO else (ZERO,)))
        if e.operand.type is not None and value_preserving(e.operand.type, e.to):
            return s
        return ALL
    if isinstance(e, ast.Unary) and e.op in ("+", "-"):
        s = _signs(e.operand, lookup)
        return s if e.op == "+" else _neg(s)
    if isinstance(e, ast.Binary) and e.op in ("+", "-", "*", "/", "%"):
        a, b = _signs(e.lhs, lookup), _signs(e.rhs, lookup)
        if e.op == "+":
            return _lift(_add, a, b)
        if e.op == "-":
            return _lift(_add, a, _neg(b))
        if e.op == "*":
            return _lift(_mul, a, b)
        if e.op == "%":
            return _lift(_mod, a, b)
        integral = e.type is not None and e.type.is_integral
        return _lift(_div_trunc if integral else _div_real, a, b)
    return ALL


@dataclass(frozen=True)
class SignElem:
    env: VarEnv
    signs: Optional[tuple]  # None is bottom
    domain: str = "sign"

    def __post_init__(self):
        if self.signs is not None and any(not s for s in self.signs):
            object.__setattr__(self, "signs", None)


class SignDomain(Domain):
    name = "sign"

    def make(self, env, signs):
        return SignElem(env, None if signs is None else tuple(frozenset(s) for s in signs))

    def bottom(self, env):
        return SignElem(env, None)

    def top(self, env):
        return SignElem(env, tuple(ALL for _ in env.names))

    def is_bottom(self, a) -> bool:
        return a.signs is None

    def leq(self, a, b) -> bool:
        self.check(a, b)
        if a.signs is None:
            return True
        if b.signs is None:
            return False
        return all(x <= y for x, y in zip(a.signs, b.signs))

    def join(self, a, b):
        self.check(a, b)
        if a.signs is None:
            return b
        if b.signs is None:
            return a
        return self.make(a.env, [x | y for x, y in zip(a.signs, b.signs)])

    def meet(self, a, b):
        self.check(a, b)
        if a.signs is None or b.signs is None:
            return self.bottom(a.env)
        return self.make(a.env, [x & y for x, y in zip(a.signs, b.signs)])

    def widen(self, a, b):
        return self.join(a, b)

    def narrow(self, a, b):
        self.check(a, b)
        if a.signs is None or b.signs is None:
            return self.bottom(a.env)
        return self.make(a.env, [y if x == ALL else x for x, y in zip(a.signs, b.signs)])

    # -- transfer functions ------------------------------------------------

    def _range(self, env, name, s):
        lo, hi = INF, NEG_INF
        integral = env.type_of(name).is_integral
        for v in s:
            if v == NEG:
                r = (NEG_INF, -1 if integral else 0)
            elif v == ZERO:
                r = (0, 0)
            else:
                r = (1 if integral else 0, INF)
            lo, hi = min(lo, r[0]), max(hi, r[1])
        return (lo, hi)

    def project(self, s, var):
        if s.signs is None:
            return None
        return self._range(s.env, var, s.signs[s.env.index[var]])

    def box(self, s) -> dict:
        return {n: self.project(s, n) for n in s.env.names}

    def _set(self, s, var, signs):
        out = list(s.signs)
        out[s.env.index[var]] = signs
        return self.make(s.env, out)

    def assign(self, s, var, rhs, sink=None):
        if s.signs is None:
            return s
        ev = arith.Evaluator(self.box(s).__getitem__, sink)
        signs = alpha_range(ev.eval(rhs))
        if ev.clean:
            signs &= _signs(rhs, lambda n: s.signs[s.env.index[n]])
        return self._set(s, var, signs)

    def assume(self, s, cond, polarity=True):
        if s.signs is None:
            return s
        box = self.box(s)
        refined = refine_box(cond, polarity, box, s.env.type_of)
        if refined is None:
            return self.bottom(s.env)
        out = [x & alpha_range(refined[n]) for n, x in zip(s.env.names, s.signs)]
        s = self.make(s.env, out)
        if s.signs is None:
            return s
        # a sign test on a single variable, e.g. x > 0 or 0 != -x
        _, clean = arith.evaluate_unwrapped(cond, box.__getitem__)
        if clean and isinstance(cond, ast.Binary) and cond.op in ast.REL_OPS:
            lhs, rhs = linearize(cond.lhs), linearize(cond.rhs)
            if lhs is not None and rhs is not None:
                coeffs, const = combine(lhs, rhs, -1)
                if len(coeffs) == 1 and const == 0:
                    (v, k), = coeffs.items()
                    op = cond.op if polarity else NEGATE[cond.op]
                    if k < 0:
                        op = FLIP[op]
                    s = self._set(s, v, s.signs[s.env.index[v]] & OP_SIGNS[op])
        return s

    def forget(self, s, var):
        if s.signs is None:
            return s
        return self._set(s, var, ALL)

    def meet_box(self, s, box: dict):
        if s.signs is None:
            return s
        return self.make(s.env, [x & alpha_range(box[n]) if n in box else x
                                 for n, x in zip(s.env.names, s.signs)])

    # -- presentation and test support -------------------------------------

    def render(self, s) -> str:
        if s.signs is None:
            return "bottom"
        return "\n".join(f"{n}: {NAMES[x]}" for n, x in zip(s.env.names, s.signs))

    def to_json(self, s):
        if s.signs is None:
            return "bottom"
        return {n: NAMES[x] for n, x in zip(s.env.names, s.signs)}

    def alpha_points(self, points, env):
        points = list(points)
        if not points:
            return self.bottom(env)
        return self.make(env, [frozenset(sign_of(v) for v in col) for col in zip(*points)])

    def contains(self, s, point) -> bool:
        if s.signs is None:
            return False
        return all(sign_of(v) in x for v, x in zip(point, s.signs))
