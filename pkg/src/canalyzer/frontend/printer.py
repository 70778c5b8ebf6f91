"""Pretty-printer back to C source text.

Output is stable and reparseable.  Implicit casts are omitted by default since
the type checker reinserts them; explicit casts are always printed.
"""

from __future__ import annotations

from fractions import Fraction

from . import ast

# binding strength; higher binds tighter
PREC = {
    "assign": 1,
    "?:": 2,
    "||": 3,
    "&&": 4,
    "==": 5, "!=": 5,
    "<": 6, "<=": 6, ">": 6, ">=": 6,
    "<<": 7, ">>": 7,
    "+": 8, "-": 8,
    "*": 9, "/": 9, "%": 9,
    "unary": 10,
    "postfix": 11,
    "atom": 12,
}

INDENT = "    "


def _int_suffix(t) -> str:
    if t is None:
        return ""
    suffix = "" if t.signed else "u"
    if t.kind == "long":
        suffix += "l"
    elif t.kind == "longlong":
        suffix += "ll"
    return suffix


def _real_text(value: Fraction) -> str:
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    digits = max(twos, fives, 1)
    scaled = abs(value) * 10 ** digits
    whole = str(int(scaled)).rjust(digits + 1, "0")
    text = whole[:-digits] + "." + whole[-digits:]
    text = text.rstrip("0")
    if text.endswith("."):
        text += "0"
    return ("-" if value < 0 else "") + text


class Printer:
    def __init__(self, show_implicit: bool = False):
        self.show_implicit = show_implicit

    def expr(self, e, outer: int = 0) -> str:
        text, prec = self._expr(e)
        return f"({text})" if prec < outer else text

    def _expr(self, e):
        if isinstance(e, ast.IntLit):
            text = str(e.value) + _int_suffix(e.type)
            return text, PREC["unary"] if e.value < 0 else PREC["atom"]
        if isinstance(e, ast.RealLit):
            suffix = {"float": "f", "longdouble": "l"}.get(e.type.kind if e.type else "", "")
            text = _real_text(e.value)
            if text is None:
                num = _real_text(Fraction(e.value.numerator))
                den = _real_text(Fraction(e.value.denominator))
                return f"{num}{suffix} / {den}{suffix}", PREC["/"]
            return text + suffix, PREC["unary"] if e.value < 0 else PREC["atom"]
        if isinstance(e, ast.VarRef):
            return e.name, PREC["atom"]
        if isinstance(e, ast.Unary):
            if e.op.startswith("post"):
                return self.expr(e.operand, PREC["postfix"]) + e.op[4:], PREC["postfix"]
            op = e.op[3:] if e.op.startswith("pre") else e.op
            inner = self.expr(e.operand, PREC["unary"])
            # keep "- -x" and "+ +x" from fusing into -- or ++
            sep = " " if inner[:1] in ("-", "+") else ""
            return op + sep + inner, PREC["unary"]
        if isinstance(e, (ast.Binary, ast.Logical)):
            p = PREC[e.op]
            lhs = self.expr(e.lhs, p)
            rhs = self.expr(e.rhs, p + 1)
            return f"{lhs} {e.op} {rhs}", p
        if isinstance(e, ast.Conditional):
            p = PREC["?:"]
            cond = self.expr(e.cond, p + 1)
            then = self.expr(e.then, 0)
            other = self.expr(e.other, p)
            return f"{cond} ? {then} : {other}", p
        if isinstance(e, ast.Assign):
            return f"{e.target.name} = {self.expr(e.value, PREC['assign'])}", PREC["assign"]
        if isinstance(e, ast.CompoundAssign):
            return f"{e.target.name} {e.op} {self.expr(e.value, PREC['assign'])}", PREC["assign"]
        if isinstance(e, ast.Cast):
            if e.implicit and not self.show_implicit:
                return self._expr(e.operand)
            return f"({e.to}){self.expr(e.operand, PREC['unary'])}", PREC["unary"]
        raise TypeError(f"cannot print {e!r}")

    # -- statements --------------------------------------------------------

    def block(self, stmts, depth: int) -> list[str]:
        lines = []
        for s in stmts:
            lines.extend(self.stmt(s, depth))
        return lines

    def braced(self, head: str, body, depth: int) -> list[str]:
        pad = INDENT * depth
        return [f"{pad}{head} {{"] + self.block(body, depth + 1) + [f"{pad}}}"]

    def decl_text(self, s: ast.Decl) -> str:
        if s.init is None:
            return f"{s.ctype} {s.name}"
        return f"{s.ctype} {s.name} = {self.expr(s.init, PREC['assign'])}"

    def stmt(self, s, depth: int) -> list[str]:
        pad = INDENT * depth
        if isinstance(s, ast.Decl):
            return [f"{pad}{self.decl_text(s)};"]
        if isinstance(s, ast.ExprStmt):
            return [f"{pad}{self.expr(s.expr)};"]
        if isinstance(s, ast.If):
            lines = self.braced(f"if ({self.expr(s.cond)})", s.then, depth)
            if s.other is not None:
                lines[-1] += " else {"
                lines += self.block(s.other, depth + 1) + [f"{pad}}}"]
            return lines
        if isinstance(s, ast.While):
            return self.braced(f"while ({self.expr(s.cond)})", s.body, depth)
        if isinstance(s, ast.DoWhile):
            lines = self.braced("do", s.body, depth)
            lines[-1] += f" while ({self.expr(s.cond)});"
            return lines
        if isinstance(s, ast.For):
            if not s.init:
                init = ""
            elif isinstance(s.init[0], ast.Decl):
                first = s.init[0]
                parts = [self.decl_text(first)]
                for d in s.init[1:]:
                    parts.append(self.decl_text(d)[len(str(d.ctype)) + 1:])
                init = ", ".join(parts)
            else:
                init = self.expr(s.init[0].expr)
            cond = "" if s.cond is None else " " + self.expr(s.cond)
            step = "" if s.step is None else " " + self.expr(s.step)
            return self.braced(f"for ({init};{cond};{step})", s.body, depth)
        if isinstance(s, ast.Break):
            return [f"{pad}break;"]
        if isinstance(s, ast.Continue):
            return [f"{pad}continue;"]
        if isinstance(s, ast.Goto):
            return [f"{pad}goto {s.label};"]
        if isinstance(s, ast.Label):
            return [f"{pad}{s.name}:"]
        if isinstance(s, ast.Assert):
            return [f"{pad}MYASSERT({self.expr(s.cond)});"]
        if isinstance(s, ast.Return):
            if s.value is None:
                return [f"{pad}return;"]
            return [f"{pad}return {self.expr(s.value)};"]
        if isinstance(s, ast.Block):
            if not s.body:
                return [f"{pad};"]
            return [f"{pad}{{"] + self.block(s.body, depth + 1) + [f"{pad}}}"]
        if isinstance(s, ast.Switch):
            return self.braced(f"switch ({self.expr(s.expr)})", s.body, depth)
        if isinstance(s, ast.Case):
            return [f"{pad}case {self.expr(s.value)}:"]
        if isinstance(s, ast.Default):
            return [f"{pad}default:"]
        raise TypeError(f"cannot print {s!r}")

    def function(self, fn: ast.Function) -> str:
        ret = "void" if fn.return_type is None else str(fn.return_type)
        lines = [f"{ret} {fn.name}()", "{"] + self.block(fn.body, 1) + ["}"]
        return "\n".join(lines) + "\n"


def to_c(node, show_implicit: bool = False) -> str:
    """Render any AST node, or a tuple of statements, as C text."""
    p = Printer(show_implicit)
    if isinstance(node, ast.Function):
        return p.function(node)
    if isinstance(node, (tuple, list)):
        return "\n".join(p.block(node, 0)) + "\n"
    if type(node).__name__ in ("IntLit", "RealLit", "VarRef", "Unary", "Binary",
                               "Logical", "Conditional", "Assign",
                               "CompoundAssign", "Cast"):
        return p.expr(node)
    return "\n".join(p.stmt(node, 0)) + "\n"
