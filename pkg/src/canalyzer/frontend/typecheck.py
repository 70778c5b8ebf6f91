"""Name resolution and implicit conversions; inner scopes are flattened."""

from __future__ import annotations

from dataclasses import replace

from .. import ctype
from ..ctype import CType
from . import ast
from .errors import FrontendError, InvalidOperands, Redeclaration, UndeclaredVariable


def coerce(expr, to: CType):
    """Wrap ``expr`` in an implicit cast unless it already has type ``to``."""
    to = to.unqualified()
    if expr.type is not None and expr.type.same(to):
        return expr
    return ast.Cast(to, expr, ctype.cast_kind(expr.type, to), True, type=to, loc=expr.loc)


class TypeChecker:
    def __init__(self, fn: ast.Function):
        self.fn = fn
        self.scopes: list[dict] = []
        self.taken: set[str] = set()
        self.variables: list = []
        self.labels: dict = {}

    # -- scopes ------------------------------------------------------------

    def declare(self, decl: ast.Decl) -> str:
        scope = self.scopes[-1]
        if decl.name in scope:
            raise Redeclaration(decl.loc, decl.name)
        flat = decl.name
        k = 1
        while flat in self.taken:
            flat = f"{decl.name}${k}"
            k += 1
        self.taken.add(flat)
        scope[decl.name] = (flat, decl.ctype)
        self.variables.append((flat, decl.ctype))
        return flat

    def lookup(self, ref: ast.VarRef):
        for scope in reversed(self.scopes):
            if ref.name in scope:
                return scope[ref.name]
        raise UndeclaredVariable(ref.loc, ref.name)

    def scoped(self, stmts) -> tuple:
        self.scopes.append({})
        try:
            return tuple(self.stmt(s) for s in stmts)
        finally:
            self.scopes.pop()

    # -- statements --------------------------------------------------------

    def run(self) -> ast.Function:
        for s in ast.walk_stmts(self.fn.body):
            if isinstance(s, ast.Label):
                if s.name in self.labels:
                    raise Redeclaration(s.loc, s.name)
                self.labels[s.name] = s
        body = self.scoped(self.fn.body)
        return replace(self.fn, body=body, variables=tuple(self.variables))

    def stmt(self, s):
        if isinstance(s, ast.Decl):
            init = None
            if s.init is not None:
                init = coerce(self.expr(s.init), s.ctype)
            flat = self.declare(s)
            return replace(s, name=flat, init=init)
        if isinstance(s, ast.ExprStmt):
            return replace(s, expr=self.expr(s.expr))
        if isinstance(s, ast.If):
            other = None if s.other is None else self.scoped(s.other)
            return replace(s, cond=self.scalar(s.cond), then=self.scoped(s.then), other=other)
        if isinstance(s, ast.While):
            return replace(s, cond=self.scalar(s.cond), body=self.scoped(s.body))
        if isinstance(s, ast.DoWhile):
            return replace(s, body=self.scoped(s.body), cond=self.scalar(s.cond))
        if isinstance(s, ast.For):
            self.scopes.append({})
            try:
                init = tuple(self.stmt(i) for i in s.init)
                cond = None if s.cond is None else self.scalar(s.cond)
                step = None if s.step is None else self.expr(s.step)
                body = self.scoped(s.body)
            finally:
                self.scopes.pop()
            return replace(s, init=init, cond=cond, step=step, body=body)
        if isinstance(s, ast.Block):
            return replace(s, body=self.scoped(s.body))
        if isinstance(s, ast.Assert):
            return replace(s, cond=self.scalar(s.cond))
        if isinstance(s, ast.Return):
            if s.value is None:
                return s
            value = self.expr(s.value)
            if self.fn.return_type is not None:
                value = coerce(value, self.fn.return_type)
            return replace(s, value=value)
        if isinstance(s, ast.Switch):
            expr = self.expr(s.expr)
            if not expr.type.is_integral:
                raise InvalidOperands(s.loc, "switch quantity is not an integer")
            expr = coerce(expr, ctype.promote(expr.type))
            return replace(s, expr=expr, body=self.scoped(s.body))
        if isinstance(s, ast.Case):
            value = self.expr(s.value)
            if not isinstance(value, ast.IntLit) and ast.reads(value):
                raise InvalidOperands(s.loc, "case label is not a constant")
            return replace(s, value=value)
        if isinstance(s, ast.Goto):
            if s.label not in self.labels:
                raise FrontendError(s.loc, f"label '{s.label}' used but not defined")
            return s
        return s  # Break, Continue, Label, Default

    # -- expressions -------------------------------------------------------

    def scalar(self, e):
        return self.expr(e)

    def expr(self, e):
        if isinstance(e, ast.IntLit):
            return e if e.type is not None else replace(e, type=ctype.INT)
        if isinstance(e, ast.RealLit):
            return e if e.type is not None else replace(e, type=ctype.DOUBLE)
        if isinstance(e, ast.VarRef):
            flat, t = self.lookup(e)
            return replace(e, name=flat, type=t.unqualified())
        if isinstance(e, ast.Unary):
            if e.op in ast.INC_OPS:
                target = self.target(e.operand, e.loc)
                return replace(e, operand=target, type=target.type)
            operand = self.expr(e.operand)
            if e.op == "!":
                return replace(e, operand=operand, type=ctype.INT)
            t = ctype.promote(operand.type)
            return replace(e, operand=coerce(operand, t), type=t)
        if isinstance(e, ast.Binary):
            lhs, rhs = self.expr(e.lhs), self.expr(e.rhs)
            if e.op in ast.SHIFT_OPS:
                if not (lhs.type.is_integral and rhs.type.is_integral):
                    raise InvalidOperands(e.loc, f"invalid operands to '{e.op}'")
                lt = ctype.promote(lhs.type)
                return replace(e, lhs=coerce(lhs, lt),
                               rhs=coerce(rhs, ctype.promote(rhs.type)), type=lt)
            if e.op == "%" and not (lhs.type.is_integral and rhs.type.is_integral):
                raise InvalidOperands(e.loc, "invalid operands to '%'")
            t = ctype.common_type(lhs.type, rhs.type)
            result = ctype.INT if e.op in ast.REL_OPS else t
            return replace(e, lhs=coerce(lhs, t), rhs=coerce(rhs, t), type=result)
        if isinstance(e, ast.Logical):
            return replace(e, lhs=self.expr(e.lhs), rhs=self.expr(e.rhs), type=ctype.INT)
        if isinstance(e, ast.Conditional):
            cond = self.expr(e.cond)
            then, other = self.expr(e.then), self.expr(e.other)
            t = ctype.common_type(then.type, other.type)
            return replace(e, cond=cond, then=coerce(then, t), other=coerce(other, t), type=t)
        if isinstance(e, ast.Assign):
            target = self.target(e.target, e.loc)
            value = coerce(self.expr(e.value), target.type)
            return replace(e, target=target, value=value, type=target.type)
        if isinstance(e, ast.CompoundAssign):
            target = self.target(e.target, e.loc)
            value = self.expr(e.value)
            op = e.op[:-1]
            if op in ast.SHIFT_OPS or op == "%":
                if not (target.type.is_integral and value.type.is_integral):
                    raise InvalidOperands(e.loc, f"invalid operands to '{e.op}'")
            if op in ast.SHIFT_OPS:
                compute = ctype.promote(target.type)
                value = coerce(value, ctype.promote(value.type))
            else:
                compute = ctype.common_type(target.type, value.type)
                value = coerce(value, compute)
            return replace(e, target=target, value=value, compute_type=compute,
                           type=target.type)
        if isinstance(e, ast.Cast):
            operand = self.expr(e.operand)
            to = e.to.unqualified()
            return replace(e, to=to, operand=operand,
                           kind=ctype.cast_kind(operand.type, to), type=to)
        raise TypeError(f"unexpected expression {e!r}")

    def target(self, ref, loc) -> ast.VarRef:
        flat, t = self.lookup(ref)
        if t.is_const:
            raise InvalidOperands(loc, f"assignment of read-only variable '{ref.name}'")
        return replace(ref, name=flat, type=t.unqualified())


def typecheck(fn: ast.Function) -> ast.Function:
    return TypeChecker(fn).run()
