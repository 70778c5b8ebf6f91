"""Concrete interpreter used as a test oracle.

Integral arithmetic wraps in two's complement, reals are exact rationals,
and division or modulus by zero traps.  The same statement semantics run
over the original AST, the normalized AST and the CFG so their behaviours
can be compared store by store.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .ctype import CType
from .frontend import ast


class Trap(Exception):
    def __init__(self, loc, kind: str):
        super().__init__(f"{loc}: {kind}")
        self.loc = loc
        self.kind = kind


class StepLimit(Exception):
    pass


class _Goto(Exception):
    def __init__(self, label):
        self.label = label


class _Break(Exception):
    pass


class _Continue(Exception):
    pass


class _Return(Exception):
    pass


def convert(value, src: Optional[CType], dst: CType):
    if dst.is_integral:
        if isinstance(value, Fraction):
            # truncation toward zero; the out-of-range case is undefined in C
            value = int(value)
        return dst.wrap(int(value))
    return Fraction(value)


def _truncdiv(a, b):
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


@dataclass
class Outcome:
    status: str  # ok unless the run trapped or diverged
    store: dict
    trap_loc: object = None
    trap_kind: Optional[str] = None
    asserts: list = field(default_factory=list)
    # (block id, store at block entry) in visiting order; CFG runs only
    visits: list = field(default_factory=list)

    def observable(self, names=None):
        """What must agree between a program and its normalized form."""
        store = self.store if names is None else {k: self.store[k] for k in names}
        if self.status == "trap":
            return ("trap", self.trap_loc, self.trap_kind, tuple(self.asserts))
        return (self.status, tuple(sorted(store.items())) if self.status == "ok" else None,
                tuple(self.asserts))


class Machine:
    def __init__(self, store: dict, max_steps: int = 20000):
        self.store = dict(store)
        self.asserts: list = []
        self.steps = 0
        self.max_steps = max_steps

    def tick(self):
        self.steps += 1
        if self.steps > self.max_steps:
            raise StepLimit()

    # -- expressions -------------------------------------------------------

    def eval(self, e):
        if isinstance(e, ast.IntLit):
            return e.value
        if isinstance(e, ast.RealLit):
            return e.value
        if isinstance(e, ast.VarRef):
            return self.store[e.name]
        if isinstance(e, ast.Cast):
            return convert(self.eval(e.operand), e.operand.type, e.to)
        if isinstance(e, ast.Unary):
            if e.op in ast.INC_OPS:
                name = e.operand.name
                t = e.operand.type
                old = self.store[name]
                delta = 1 if "++" in e.op else -1
                new = convert(old + delta, None, t)
                self.store[name] = new
                return new if e.op.startswith("pre") else old
            v = self.eval(e.operand)
            if e.op == "!":
                return int(v == 0)
            if e.op == "-":
                v = -v
            return convert(v, None, e.type) if e.type.is_integral else v
        if isinstance(e, ast.Binary):
            a = self.eval(e.lhs)
            b = self.eval(e.rhs)
            return self.binop(e.op, a, b, e.type, e.loc)
        if isinstance(e, ast.Logical):
            a = self.eval(e.lhs) != 0
            if e.op == "&&" and not a:
                return 0
            if e.op == "||" and a:
                return 1
            return int(self.eval(e.rhs) != 0)
        if isinstance(e, ast.Conditional):
            return self.eval(e.then) if self.eval(e.cond) != 0 else self.eval(e.other)
        if isinstance(e, ast.Assign):
            v = self.eval(e.value)
            self.store[e.target.name] = v
            return v
        if isinstance(e, ast.CompoundAssign):
            t = e.target.type
            old = convert(self.store[e.target.name], t, e.compute_type)
            v = self.eval(e.value)
            result = self.binop(e.op[:-1], old, v, e.compute_type, e.loc)
            result = convert(result, e.compute_type, t)
            self.store[e.target.name] = result
            return result
        raise TypeError(f"cannot evaluate {e!r}")

    @staticmethod
    def binop(op, a, b, t: CType, loc):
        if op in ast.REL_OPS:
            return int({"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b,
                        "==": a == b, "!=": a != b}[op])
        if op in ("/", "%") and b == 0:
            raise Trap(loc, "DivByZero" if op == "/" else "ModByZero")
        if op in ast.SHIFT_OPS:
            # out-of-range shift counts are undefined; pick a fixed result
            if not 0 <= b < t.bits:
                return 0
            return t.wrap(a << b) if op == "<<" else a >> b
        if op == "+":
            r = a + b
        elif op == "-":
            r = a - b
        elif op == "*":
            r = a * b
        elif op == "/":
            r = _truncdiv(a, b) if t.is_integral else Fraction(a) / b
        else:
            r = a - b * _truncdiv(a, b)
        return t.wrap(r) if t.is_integral else r

    # -- statements --------------------------------------------------------

    def exec_simple(self, s):
        """Execute one straight-line statement."""
        self.tick()
        if isinstance(s, ast.Decl):
            if s.init is not None:
                self.store[s.name] = self.eval(s.init)
        elif isinstance(s, ast.ExprStmt):
            self.eval(s.expr)
        elif isinstance(s, ast.Assert):
            self.asserts.append((s.loc, self.eval(s.cond) != 0))
        else:
            raise TypeError(f"not a simple statement: {s!r}")

    def exec_list(self, stmts):
        i = 0
        while i < len(stmts):
            try:
                self.exec_stmt(stmts[i])
            except _Goto as g:
                for j, s in enumerate(stmts):
                    if isinstance(s, ast.Label) and s.name == g.label:
                        i = j
                        break
                else:
                    raise
            i += 1

    def exec_stmt(self, s):
        if isinstance(s, (ast.Decl, ast.ExprStmt, ast.Assert)):
            self.exec_simple(s)
        elif isinstance(s, ast.If):
            self.tick()
            if self.eval(s.cond) != 0:
                self.exec_list(s.then)
            elif s.other is not None:
                self.exec_list(s.other)
        elif isinstance(s, ast.While):
            while True:
                self.tick()
                if self.eval(s.cond) == 0:
                    break
                try:
                    self.exec_list(s.body)
                except _Break:
                    break
                except _Continue:
                    pass
        elif isinstance(s, ast.DoWhile):
            while True:
                self.tick()
                try:
                    self.exec_list(s.body)
                except _Break:
                    break
                except _Continue:
                    pass
                if self.eval(s.cond) == 0:
                    break
        elif isinstance(s, ast.For):
            self.exec_list(s.init)
            while True:
                self.tick()
                if s.cond is not None and self.eval(s.cond) == 0:
                    break
                try:
                    self.exec_list(s.body)
                except _Break:
                    break
                except _Continue:
                    pass
                if s.step is not None:
                    self.eval(s.step)
        elif isinstance(s, ast.Switch):
            self.tick()
            v = self.eval(s.expr)
            start = None
            for i, item in enumerate(s.body):
                if isinstance(item, ast.Case) and convert(self.eval(item.value), None, s.expr.type) == v:
                    start = i
                    break
            if start is None:
                for i, item in enumerate(s.body):
                    if isinstance(item, ast.Default):
                        start = i
            if start is not None:
                try:
                    self.exec_list(s.body[start:])
                except _Break:
                    pass
        elif isinstance(s, ast.Block):
            self.exec_list(s.body)
        elif isinstance(s, ast.Break):
            raise _Break()
        elif isinstance(s, ast.Continue):
            raise _Continue()
        elif isinstance(s, ast.Goto):
            raise _Goto(s.label)
        elif isinstance(s, ast.Return):
            if s.value is not None:
                self.eval(s.value)
            raise _Return()
        elif isinstance(s, (ast.Label, ast.Case, ast.Default)):
            pass
        else:
            raise TypeError(f"cannot execute {s!r}")


def initial_store(fn: ast.Function, inputs: dict) -> dict:
    store = {}
    for name, t in fn.variables:
        value = inputs.get(name, 0)
        store[name] = convert(value, None, t)
    return store


def run_ast(fn: ast.Function, inputs: dict, max_steps: int = 20000) -> Outcome:
    m = Machine(initial_store(fn, inputs), max_steps)
    try:
        m.exec_list(fn.body)
    except _Return:
        pass
    except Trap as t:
        return Outcome("trap", m.store, t.loc, t.kind, m.asserts)
    except StepLimit:
        return Outcome("diverge", m.store, asserts=m.asserts)
    return Outcome("ok", m.store, asserts=m.asserts)


def run_cfg(cfg, fn: ast.Function, inputs: dict, max_steps: int = 20000) -> Outcome:
    """Execute ``cfg`` block by block, recording each block-entry store."""
    m = Machine(initial_store(fn, inputs), max_steps)
    visits = []
    block_id = cfg.entry
    try:
        while True:
            block = cfg.blocks[block_id]
            visits.append((block_id, dict(m.store)))
            m.tick()
            for s in block.statements:
                if isinstance(s, ast.Return):
                    if s.value is not None:
                        m.eval(s.value)
                else:
                    m.exec_simple(s)
            if not block.successors:
                break
            if block.condition is not None:
                taken = m.eval(block.condition) != 0
                block_id = block.successors[0] if taken else block.successors[1]
            else:
                block_id = block.successors[0]
    except Trap as t:
        return Outcome("trap", m.store, t.loc, t.kind, m.asserts, visits)
    except StepLimit:
        return Outcome("diverge", m.store, asserts=m.asserts, visits=visits)
    return Outcome("ok", m.store, asserts=m.asserts, visits=visits)


def uninitialized_inputs(fn: ast.Function) -> list:
    """Names of user variables declared without an initializer."""
    names = []
    for s in ast.walk_stmts(fn.body):
        if isinstance(s, ast.Decl) and s.init is None and s.name not in names:
            names.append(s.name)
    return names


def input_grid(names, lo: int = -8, hi: int = 8, limit: int = 1500, seed: int = 0) -> list:
    """Every assignment of [lo, hi] to ``names``; sampled when too large.

    Sampling is deterministic and always keeps the all-corner combinations.
    """
    values = range(lo, hi + 1)
    total = len(values) ** len(names)
    if total <= limit:
        return [dict(zip(names, combo)) for combo in itertools.product(values, repeat=len(names))]
    rng = random.Random(seed)
    corners = [dict(zip(names, combo))
               for combo in itertools.product((lo, 0, hi), repeat=len(names))][:limit // 2]
    picks = [{n: rng.randint(lo, hi) for n in names} for _ in range(limit - len(corners))]
    return corners + picks
