"""Source-to-source simplification into the small statement set the engine handles.

After :func:`normalize` a function contains only declarations, top-level
assignments (possibly cascaded), if/else, while, forward gotos, labels,
assertions, returns and blocks.  Conditions are single relational comparisons
or constants.
"""

from __future__ import annotations

import re
from dataclasses import replace
from fractions import Fraction

from . import ctype
from .ctype import CType
from .frontend import ast
from .frontend.errors import FrontendError, UnsupportedFeature
from .frontend.typecheck import coerce


class BreakOutsideLoop(FrontendError):
    def __init__(self, loc):
        super().__init__(loc, "break statement not within a loop or switch")


# ---------------------------------------------------------------------------
# small helpers


def lit(value, t: CType, loc=ast.NOLOC):
    if t.is_integral:
        return ast.IntLit(int(value), type=t, loc=loc)
    return ast.RealLit(Fraction(value), type=t, loc=loc)


def var(name: str, t: CType, loc=ast.NOLOC) -> ast.VarRef:
    return ast.VarRef(name, type=t, loc=loc)


def assign_stmt(target: ast.VarRef, value, loc) -> ast.ExprStmt:
    value = coerce(value, target.type)
    return ast.ExprStmt(ast.Assign(target, value, type=target.type, loc=loc), loc=loc)


def is_boolish(e) -> bool:
    if isinstance(e, ast.Logical):
        return True
    if isinstance(e, ast.Unary) and e.op == "!":
        return True
    return isinstance(e, ast.Binary) and e.op in ast.REL_OPS


class Fresh:
    """Generator for temporaries ``__t<k>`` and labels ``__L<k>``."""

    def __init__(self, fn: ast.Function):
        tnums = [int(m.group(1)) for name, _ in fn.variables
                 if (m := re.fullmatch(r"__t(\d+)", name))]
        lnums = [int(m.group(1)) for s in ast.walk_stmts(fn.body)
                 if isinstance(s, ast.Label) and (m := re.fullmatch(r"__L(\d+)", s.name))]
        self.next_temp = max(tnums, default=-1) + 1
        self.next_label = max(lnums, default=-1) + 1
        self.new_vars: list = []

    def label(self) -> str:
        name = f"__L{self.next_label}"
        self.next_label += 1
        return name

    def temp(self, t: CType) -> str:
        name = f"__t{self.next_temp}"
        self.next_temp += 1
        self.new_vars.append((name, t.unqualified()))
        return name

    def finish(self, fn: ast.Function, body) -> ast.Function:
        return replace(fn, body=tuple(body), variables=fn.variables + tuple(self.new_vars))


def map_stmts(stmts, fn, into_loops=True, into_switch=True) -> tuple:
    """Rewrite statements bottom-up.

    ``fn`` maps one statement to a list of statements; nested bodies are
    rewritten first.  Loop and switch bodies can be excluded from descent.
    """
    out = []
    for s in stmts:
        if isinstance(s, ast.If):
            other = None if s.other is None else map_stmts(s.other, fn, into_loops, into_switch)
            s = replace(s, then=map_stmts(s.then, fn, into_loops, into_switch), other=other)
        elif isinstance(s, ast.Block):
            s = replace(s, body=map_stmts(s.body, fn, into_loops, into_switch))
        elif isinstance(s, (ast.While, ast.DoWhile, ast.For)) and into_loops:
            s = replace(s, body=map_stmts(s.body, fn, into_loops, into_switch))
        elif isinstance(s, ast.Switch) and into_switch:
            s = replace(s, body=map_stmts(s.body, fn, into_loops, into_switch))
        out.extend(fn(s))
    return tuple(out)


def clone(stmts, fresh: Fresh) -> tuple:
    """Copy of ``stmts`` with every label defined inside renamed."""
    if stmts is None:
        return None
    defined = {s.name for s in ast.walk_stmts(stmts) if isinstance(s, ast.Label)}
    if not defined:
        return tuple(stmts)
    mapping = {name: fresh.label() for name in sorted(defined)}

    def rename(s):
        if isinstance(s, ast.Label):
            return [replace(s, name=mapping[s.name])]
        if isinstance(s, ast.Goto) and s.label in mapping:
            return [replace(s, label=mapping[s.label])]
        return [s]

    return map_stmts(stmts, rename)


# ---------------------------------------------------------------------------
# loops


def _replace_jumps(stmts, kind, label, loc_default=None):
    """Turn ``kind`` (Break or Continue) statements bound to the current
    construct into ``goto label``.  Returns (new stmts, used?)."""
    used = False

    def rewrite(s):
        nonlocal used
        if isinstance(s, kind):
            used = True
            return [ast.Goto(label, loc=s.loc)]
        return [s]

    # continue binds to the nearest loop; break to the nearest loop or switch
    into_switch = kind is ast.Continue
    new = map_stmts(stmts, rewrite, into_loops=False, into_switch=into_switch)
    return new, used


def desugar_loops(fn: ast.Function) -> ast.Function:
    """Rewrite for and do-while into while; continue becomes a forward goto."""
    fresh = Fresh(fn)

    def with_continue(body):
        label = fresh.label()
        new, used = _replace_jumps(body, ast.Continue, label)
        if not used:
            fresh.next_label -= 1
            return tuple(body)
        return new + (ast.Label(label),)

    def rewrite(s):
        if isinstance(s, ast.While):
            return [replace(s, body=with_continue(s.body))]
        if isinstance(s, ast.For):
            body = with_continue(s.body)
            if s.step is not None:
                body = body + (ast.ExprStmt(s.step, loc=s.step.loc),)
            cond = s.cond if s.cond is not None else lit(1, ctype.INT, s.loc)
            return list(s.init) + [ast.While(cond, body, loc=s.loc)]
        if isinstance(s, ast.DoWhile):
            first = with_continue(s.body)
            exit_label = fresh.label()
            first, used = _replace_jumps(first, ast.Break, exit_label)
            if not used:
                fresh.next_label -= 1
            second = with_continue(clone(s.body, fresh))
            out = [ast.Block(first, loc=s.loc), ast.While(s.cond, second, loc=s.loc)]
            if used:
                out.append(ast.Label(exit_label, loc=s.loc))
            return out
        return [s]

    return fresh.finish(fn, map_stmts(fn.body, rewrite))


def desugar_break(fn: ast.Function) -> ast.Function:
    """Replace ``break`` in while loops by a goto to a label after the loop."""
    fresh = Fresh(fn)

    def rewrite(s):
        if isinstance(s, ast.While):
            label = fresh.label()
            body, used = _replace_jumps(s.body, ast.Break, label)
            if not used:
                fresh.next_label -= 1
                return [s]
            return [replace(s, body=body), ast.Label(label, loc=s.loc)]
        if isinstance(s, (ast.For, ast.DoWhile)):
            raise ValueError("desugar_break expects loops already rewritten to while")
        return [s]

    body = map_stmts(fn.body, rewrite)
    # anything left outside a switch has no enclosing loop
    for s in ast.walk_stmts(map_stmts(body, lambda s: [] if isinstance(s, ast.Switch) else [s],
                                      into_loops=False, into_switch=False)):
        if isinstance(s, ast.Break):
            raise BreakOutsideLoop(s.loc)
    return fresh.finish(fn, body)


# ---------------------------------------------------------------------------
# logical operators, conditionals, side effects, switch


def _strip_implicit(e):
    while isinstance(e, ast.Cast) and e.implicit:
        e = e.operand
    return e


def _rewrap(outer, inner):
    """Put ``inner`` where the core of ``outer`` was, keeping one implicit cast."""
    if isinstance(outer, ast.Cast) and outer.implicit:
        return coerce(inner, outer.to)
    return inner


def const_value(e):
    """Value of an integral constant expression, or None."""
    folded = fold_expr(e)
    if isinstance(folded, ast.IntLit):
        return folded.value
    return None


class Lowering:
    def __init__(self, fresh: Fresh):
        self.fresh = fresh

    # -- expressions in value position -------------------------------------

    def expr(self, e):
        """Return (statements, pure expression) computing ``e``."""
        if isinstance(e, (ast.IntLit, ast.RealLit, ast.VarRef)):
            return [], e
        if isinstance(e, ast.Cast):
            pre, v = self.expr(e.operand)
            return pre, replace(e, operand=v)
        if isinstance(e, ast.Unary):
            if e.op in ast.INC_OPS:
                target = e.operand
                update = self.incdec(e)
                if e.op.startswith("pre"):
                    return update, target
                t = self.fresh.temp(target.type)
                saved = ast.Decl(t, target.type, target, loc=e.loc)
                return [saved] + update, var(t, target.type, e.loc)
            if e.op == "!":
                return self.boolish(e)
            pre, v = self.expr(e.operand)
            return pre, replace(e, operand=v)
        if isinstance(e, ast.Binary):
            if e.op in ast.REL_OPS:
                return self.boolish(e)
            return self.binary(e)
        if isinstance(e, (ast.Logical, ast.Conditional)):
            return self.boolish(e)
        if isinstance(e, ast.Assign):
            return self.assign(e.target, e.value, e.loc), e.target
        if isinstance(e, ast.CompoundAssign):
            return self.assign(e.target, self.compound_value(e), e.loc), e.target
        raise TypeError(f"unexpected expression {e!r}")

    def binary(self, e):
        lpre, lhs = self.expr(e.lhs)
        rpre, rhs = self.expr(e.rhs)
        if rpre and not isinstance(lhs, (ast.IntLit, ast.RealLit)):
            # keep left-to-right evaluation when the right operand has effects
            t = self.fresh.temp(lhs.type)
            lpre = lpre + [ast.Decl(t, lhs.type, lhs, loc=e.loc)]
            lhs = var(t, lhs.type, e.loc)
        return lpre + rpre, replace(e, lhs=lhs, rhs=rhs)

    def boolish(self, e):
        t = self.fresh.temp(e.type)
        target = var(t, e.type, e.loc)
        stmts = [ast.Decl(t, e.type, None, loc=e.loc)]
        return stmts + self.assign(target, e, e.loc), target

    def incdec(self, e) -> list:
        target = e.operand
        t = target.type
        pt = ctype.promote(t) if t.is_integral else t
        op = "+" if "++" in e.op else "-"
        value = ast.Binary(op, coerce(target, pt), lit(1, pt, e.loc), type=pt, loc=e.loc)
        return self.assign(target, coerce(value, t), e.loc)

    @staticmethod
    def compound_value(e: ast.CompoundAssign):
        ct = e.compute_type
        t = e.target.type
        value = ast.Binary(e.op[:-1], coerce(e.target, ct), e.value, type=ct, loc=e.loc)
        return coerce(value, t)

    # -- assignments -------------------------------------------------------

    def assign(self, target: ast.VarRef, value, loc) -> list:
        core = _strip_implicit(value)
        t = target.type
        if isinstance(core, ast.Conditional):
            then = self.assign(target, _rewrap(value, core.then), loc)
            other = self.assign(target, _rewrap(value, core.other), loc)
            return self.cond(core.cond, then, other)
        if is_boolish(core):
            one = self.assign(target, _rewrap(value, lit(1, ctype.INT, loc)), loc)
            zero = self.assign(target, _rewrap(value, lit(0, ctype.INT, loc)), loc)
            return self.cond(core, one, zero)
        if isinstance(core, (ast.Assign, ast.CompoundAssign)):
            if isinstance(core, ast.CompoundAssign):
                inner = self.assign(core.target, self.compound_value(core), core.loc)
            else:
                inner = self.assign(core.target, core.value, core.loc)
            if len(inner) == 1 and isinstance(inner[0], ast.ExprStmt):
                # cascaded assignment stays a single statement
                chained = _rewrap(value, inner[0].expr)
                return [ast.ExprStmt(ast.Assign(target, coerce(chained, t), type=t, loc=loc),
                                     loc=loc)]
            return inner + [assign_stmt(target, _rewrap(value, core.target), loc)]
        pre, v = self.expr(value)
        return pre + [assign_stmt(target, v, loc)]

    # -- conditions ----------------------------------------------------------

    def cond(self, e, then: list, other) -> list:
        """Statements that run ``then`` if ``e`` holds and ``other`` otherwise.

        ``other`` may be None (no else branch).
        """
        e = _strip_implicit(e)
        if isinstance(e, ast.Logical):
            if e.op == "&&":
                inner = self.cond(e.rhs, then, other)
                return self.cond(e.lhs, inner, clone(other, self.fresh))
            inner = self.cond(e.rhs, clone(then, self.fresh), other)
            return self.cond(e.lhs, then, inner)
        if isinstance(e, ast.Unary) and e.op == "!":
            return self.cond(e.operand, list(other or []), then)
        if isinstance(e, ast.Conditional):
            yes = self.cond(e.then, then, other)
            no = self.cond(e.other, clone(then, self.fresh), clone(other, self.fresh))
            return self.cond(e.cond, yes, no)
        if isinstance(e, ast.Binary) and e.op in ast.REL_OPS:
            pre, atom = self.binary(e)
        else:
            pre, v = self.expr(e)
            atom = ast.Binary("!=", v, lit(0, v.type, e.loc), type=ctype.INT, loc=e.loc)
        other = None if other is None else tuple(other)
        return pre + [ast.If(atom, tuple(then), other, loc=e.loc)]

    def atom(self, e):
        """(statements, atom) when ``e`` is expressible as one comparison."""
        e = _strip_implicit(e)
        if isinstance(e, (ast.Logical, ast.Conditional)) or (
            isinstance(e, ast.Unary) and e.op == "!"
        ):
            return None
        if isinstance(e, ast.Binary) and e.op in ast.REL_OPS:
            pre, atom = self.binary(e)
            if any(is_boolish(x) for x in (atom.lhs, atom.rhs)):
                return None
            return pre, atom
        pre, v = self.expr(e)
        return pre, ast.Binary("!=", v, lit(0, v.type, e.loc), type=ctype.INT, loc=e.loc)

    # -- statements --------------------------------------------------------

    def block(self, stmts) -> tuple:
        out = []
        for s in stmts:
            out.extend(self.stmt(s))
        return tuple(out)

    def stmt(self, s) -> list:
        if isinstance(s, ast.Decl):
            if s.init is None:
                return [s]
            core = _strip_implicit(s.init)
            if isinstance(core, ast.Conditional) or is_boolish(core):
                target = var(s.name, s.ctype.unqualified(), s.loc)
                return [replace(s, init=None)] + self.assign(target, s.init, s.loc)
            pre, v = self.expr(s.init)
            return pre + [replace(s, init=v)]
        if isinstance(s, ast.ExprStmt):
            e = s.expr
            if isinstance(e, ast.Assign):
                return self.assign(e.target, e.value, e.loc)
            if isinstance(e, ast.CompoundAssign):
                return self.assign(e.target, self.compound_value(e), e.loc)
            if isinstance(e, ast.Unary) and e.op in ast.INC_OPS:
                return self.incdec(e)
            pre, v = self.expr(e)
            if isinstance(v, (ast.IntLit, ast.RealLit, ast.VarRef)):
                return pre
            # keep the computation (it may trap); the temporary is never read
            t = self.fresh.temp(v.type)
            return pre + [ast.Decl(t, v.type, v, loc=s.loc)]
        if isinstance(s, ast.If):
            other = None if s.other is None else list(self.block(s.other))
            return self.cond(s.cond, list(self.block(s.then)), other)
        if isinstance(s, ast.While):
            body = self.block(s.body)
            simple = self.atom(s.cond)
            if simple is not None and not simple[0]:
                return [replace(s, cond=simple[1], body=body)]
            exit_label = self.fresh.label()
            test = self.cond(s.cond, [], [ast.Goto(exit_label, loc=s.loc)])
            forever = ast.Binary("!=", lit(1, ctype.INT, s.loc), lit(0, ctype.INT, s.loc),
                                 type=ctype.INT, loc=s.loc)
            return [ast.While(forever, tuple(test) + body, loc=s.loc),
                    ast.Label(exit_label, loc=s.loc)]
        if isinstance(s, ast.Assert):
            simple = self.atom(s.cond)
            if simple is not None:
                pre, atom = simple
                return pre + [replace(s, cond=atom)]
            pre, v = self.boolish(s.cond) if is_boolish(_strip_implicit(s.cond)) else \
                self.expr(s.cond)
            atom = ast.Binary("!=", v, lit(0, v.type, s.loc), type=ctype.INT, loc=s.loc)
            return pre + [replace(s, cond=atom)]
        if isinstance(s, ast.Return):
            if s.value is None:
                return [s]
            pre, v = self.expr(s.value)
            return pre + [replace(s, value=v)]
        if isinstance(s, ast.Block):
            return [replace(s, body=self.block(s.body))]
        if isinstance(s, ast.Switch):
            return self.switch(s)
        if isinstance(s, (ast.Goto, ast.Label)):
            return [s]
        raise TypeError(f"unexpected statement {s!r} during lowering")

    def switch(self, s: ast.Switch) -> list:
        for inner in s.body:
            for node in ast.walk(inner):
                if isinstance(node, (ast.Case, ast.Default)) and node is not inner:
                    raise UnsupportedFeature(node.loc, "case labels nested inside statements")
        t = s.expr.type
        pre, v = self.expr(s.expr)
        if not isinstance(v, (ast.VarRef, ast.IntLit)):
            name = self.fresh.temp(t)
            pre.append(ast.Decl(name, t, v, loc=s.loc))
            v = var(name, t, s.loc)

        # sections: (case values, has_default, statements)
        sections = []
        for item in s.body:
            if isinstance(item, (ast.Case, ast.Default)):
                if not sections or sections[-1][2]:
                    sections.append(([], False, []))
                values, has_default, stmts = sections[-1]
                if isinstance(item, ast.Default):
                    sections[-1] = (values, True, stmts)
                else:
                    value = const_value(item.value)
                    if value is None:
                        raise UnsupportedFeature(item.loc, "non-constant case label")
                    values.append(t.wrap(value))
            elif not sections:
                continue  # unreachable code before the first label
            else:
                sections[-1][2].append(item)

        exit_label = self.fresh.label()

        def ends_with_jump(stmts):
            return bool(stmts) and isinstance(stmts[-1], (ast.Break, ast.Goto, ast.Return))

        def test(values, loc):
            conds = [ast.Binary("==", v, lit(c, t, loc), type=ctype.INT, loc=loc) for c in values]
            expr = conds[0]
            for c in conds[1:]:
                expr = ast.Logical("||", expr, c, type=ctype.INT, loc=loc)
            return expr

        clean = all(ends_with_jump(stmts) for _, _, stmts in sections[:-1])
        used = False

        def body_of(stmts):
            nonlocal used
            stmts = list(stmts)
            if stmts and isinstance(stmts[-1], ast.Break):
                stmts = stmts[:-1]
            new, hit = _replace_jumps(stmts, ast.Break, exit_label)
            used = used or hit
            return list(self.block(new))

        out = list(pre)
        if clean:
            default = None
            chain = []
            for values, has_default, stmts in sections:
                if has_default:
                    default = body_of(stmts)
                else:
                    chain.append((values, body_of(stmts)))
            tail = default
            for values, stmts in reversed(chain):
                tail = self.cond(test(values, s.loc), stmts, tail)
            out += tail or []
        else:
            labels = [self.fresh.label() for _ in sections]
            default_target = exit_label
            for (values, has_default, _), label in zip(sections, labels):
                if values:
                    out += self.cond(test(values, s.loc), [ast.Goto(label, loc=s.loc)], None)
                if has_default:
                    default_target = label
            out.append(ast.Goto(default_target, loc=s.loc))
            used = used or default_target == exit_label
            for (_, _, stmts), label in zip(sections, labels):
                out.append(ast.Label(label, loc=s.loc))
                new, hit = _replace_jumps(stmts, ast.Break, exit_label)
                used = used or hit
                out += list(self.block(new))
        if used:
            out.append(ast.Label(exit_label, loc=s.loc))
        return out


def desugar_logical(fn: ast.Function) -> ast.Function:
    """Lower &&, ||, !, ?:, switch and embedded side effects into if-else ladders."""
    fresh = Fresh(fn)
    body = Lowering(fresh).block(fn.body)
    return fresh.finish(fn, body)


# ---------------------------------------------------------------------------
# constant folding


def _div_trunc(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def fold_expr(e):
    """Fold integral literal sub-expressions; returns a new expression."""
    if isinstance(e, (ast.IntLit, ast.RealLit, ast.VarRef)):
        return e
    if isinstance(e, ast.Cast):
        operand = fold_expr(e.operand)
        e = replace(e, operand=operand)
        if isinstance(operand, ast.IntLit) and e.to.is_integral:
            lo, hi = e.to.range()
            if lo <= operand.value <= hi:
                return ast.IntLit(operand.value, type=e.to, loc=e.loc)
            if not e.to.signed:
                return ast.IntLit(e.to.wrap(operand.value), type=e.to, loc=e.loc)
        return e
    if isinstance(e, ast.Unary):
        operand = fold_expr(e.operand)
        e = replace(e, operand=operand)
        if isinstance(operand, ast.IntLit) and e.op in ("+", "-"):
            value = operand.value if e.op == "+" else -operand.value
            return _fit(value, e.type, e)
        if isinstance(operand, ast.IntLit) and e.op == "!":
            return ast.IntLit(int(operand.value == 0), type=ctype.INT, loc=e.loc)
        return e
    if isinstance(e, ast.Binary):
        lhs, rhs = fold_expr(e.lhs), fold_expr(e.rhs)
        e = replace(e, lhs=lhs, rhs=rhs)
        if not (isinstance(lhs, ast.IntLit) and isinstance(rhs, ast.IntLit)):
            return e
        a, b = lhs.value, rhs.value
        op = e.op
        if op in ast.REL_OPS:
            result = {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b,
                      "==": a == b, "!=": a != b}[op]
            return ast.IntLit(int(result), type=ctype.INT, loc=e.loc)
        if op in ("/", "%"):
            if b == 0:
                return e
            q = _div_trunc(a, b)
            value = q if op == "/" else a - b * q
        elif op in ast.SHIFT_OPS:
            if not 0 <= b < e.type.bits or (e.type.signed and a < 0):
                return e
            value = a << b if op == "<<" else a >> b
        else:
            value = {"+": a + b, "-": a - b, "*": a * b}[op]
        return _fit(value, e.type, e)
    if isinstance(e, (ast.Logical, ast.Conditional, ast.Assign, ast.CompoundAssign)):
        changes = {}
        for name in ("lhs", "rhs", "cond", "then", "other", "value"):
            if hasattr(e, name):
                changes[name] = fold_expr(getattr(e, name))
        return replace(e, **changes)
    return e


def _fit(value: int, t: CType, e):
    if t is None or not t.is_integral:
        return e
    lo, hi = t.range()
    if lo <= value <= hi:
        return ast.IntLit(value, type=t, loc=e.loc)
    if not t.signed:
        return ast.IntLit(t.wrap(value), type=t, loc=e.loc)
    return e  # signed overflow: leave for the analyzer to report


def fold_constants(fn: ast.Function) -> ast.Function:
    """Fold literal-only integral sub-expressions (no algebraic identities)."""

    def rewrite(s):
        if isinstance(s, ast.Decl) and s.init is not None:
            return [replace(s, init=fold_expr(s.init))]
        if isinstance(s, ast.ExprStmt):
            return [replace(s, expr=fold_expr(s.expr))]
        if isinstance(s, (ast.If, ast.While, ast.Assert)):
            return [replace(s, cond=fold_expr(s.cond))]
        if isinstance(s, ast.DoWhile):
            return [replace(s, cond=fold_expr(s.cond))]
        if isinstance(s, ast.Return) and s.value is not None:
            return [replace(s, value=fold_expr(s.value))]
        return [s]

    return replace(fn, body=map_stmts(fn.body, rewrite))


# ---------------------------------------------------------------------------
# unused variables


def _may_trap(e) -> bool:
    return any(isinstance(n, ast.Binary) and n.op in ("/", "%") for n in ast.walk(e))


def remove_unused(fn: ast.Function) -> ast.Function:
    """Drop declarations of variables that are never mentioned afterwards.

    A declaration whose initializer contains a division is kept so that a
    division by zero still happens at the same place.
    """
    body = fn.body
    while True:
        mentioned = set()
        for s in ast.walk_stmts(body):
            if isinstance(s, ast.VarRef):
                mentioned.add(s.name)
        dead = {
            s.name for s in ast.walk_stmts(body)
            if isinstance(s, ast.Decl) and s.name not in mentioned
            and not (s.init is not None and _may_trap(s.init))
        }
        if not dead:
            break
        body = map_stmts(body, lambda s: [] if isinstance(s, ast.Decl) and s.name in dead else [s])
    keep = {s.name for s in ast.walk_stmts(body) if isinstance(s, ast.Decl)} | mentioned
    variables = tuple((n, t) for n, t in fn.variables if n in keep)
    return replace(fn, body=body, variables=variables)


# ---------------------------------------------------------------------------
# checks and pipeline

FORBIDDEN = (ast.DoWhile, ast.For, ast.Break, ast.Continue, ast.Logical, ast.Conditional,
             ast.Switch, ast.Case, ast.Default)


def normal_form_violations(fn: ast.Function) -> list:
    """Nodes that are not allowed after normalization (empty when clean)."""
    bad = []
    for node in ast.walk_stmts(fn.body):
        if isinstance(node, FORBIDDEN):
            bad.append(node)
        elif isinstance(node, ast.Unary) and node.op in ast.INC_OPS + ("!",):
            bad.append(node)
        elif isinstance(node, ast.CompoundAssign):
            bad.append(node)
        elif isinstance(node, ast.ExprStmt) and not isinstance(node.expr, ast.Assign):
            bad.append(node)
    return bad


def check_forward_gotos(fn: ast.Function):
    """Raise UnsupportedFeature for any goto whose label is not later in the text."""
    seen_labels = set()
    pending = []
    for node in ast.walk_stmts(fn.body):
        if isinstance(node, ast.Label):
            seen_labels.add(node.name)
        elif isinstance(node, ast.Goto):
            if node.label in seen_labels:
                raise UnsupportedFeature(node.loc, "backward goto")
            pending.append(node)
    labels = seen_labels
    for g in pending:
        if g.label not in labels:
            raise FrontendError(g.loc, f"label '{g.label}' used but not defined")


PIPELINE = (desugar_loops, desugar_break, desugar_logical, fold_constants, remove_unused)


def normalize(fn: ast.Function) -> ast.Function:
    """Run the full simplification pipeline on a type-checked function."""
    check_forward_gotos(fn)
    for step in PIPELINE:
        fn = step(fn)
    check_forward_gotos(fn)
    return fn
