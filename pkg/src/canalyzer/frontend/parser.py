"""Recursive-descent parser producing the untyped AST.

Only function definitions are accepted at top level.  Constructs outside the
supported subset (arrays, pointers, aggregates, calls other than MYASSERT,
bitwise logic) raise :class:`UnsupportedFeature` rather than being skipped.
"""

from __future__ import annotations

from .. import ctype
from ..ctype import CType
from . import ast
from .errors import ParseError, UnsupportedFeature
from .lexer import Token

ASSIGN_OPS = ("=", "+=", "-=", "*=", "/=", "%=", "<<=", ">>=")
BITWISE_ASSIGN = ("&=", "|=", "^=")

# binary precedence levels, lowest first
BINARY_LEVELS = (
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("<<", ">>"),
    ("+", "-"),
    ("*", "/", "%"),
)

TYPE_WORDS = {"int", "char", "short", "long", "signed", "unsigned", "float",
              "double", "const", "void"}
UNSUPPORTED_WORDS = {
    "struct": "structures and unions",
    "union": "structures and unions",
    "enum": "enumerations",
    "typedef": "typedef",
    "sizeof": "sizeof",
    "_Bool": "_Bool",
    "static": "storage classes",
    "extern": "storage classes",
    "register": "storage classes",
    "auto": "storage classes",
    "volatile": "volatile",
}


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.loop_depth = 0
        self.switch_depth = 0

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, *texts) -> bool:
        t = self.tok
        return t.kind in ("punct", "keyword") and t.text in texts

    def next(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise ParseError(self.tok.loc, f"'{text}'", str(self.tok))
        return self.next()

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            if self.tok.kind == "keyword" and self.tok.text in UNSUPPORTED_WORDS:
                raise UnsupportedFeature(self.tok.loc, UNSUPPORTED_WORDS[self.tok.text])
            raise ParseError(self.tok.loc, "identifier", str(self.tok))
        return self.next()

    def reject_unsupported(self):
        t = self.tok
        if t.kind == "keyword" and t.text in UNSUPPORTED_WORDS:
            raise UnsupportedFeature(t.loc, UNSUPPORTED_WORDS[t.text])

    # -- types -------------------------------------------------------------

    def at_type(self) -> bool:
        self.reject_unsupported()
        return self.tok.kind == "keyword" and self.tok.text in TYPE_WORDS

    def type_spec(self, allow_void=False):
        """Parse declaration specifiers; returns a CType or None for void."""
        start = self.tok
        words = []
        while self.tok.kind == "keyword" and self.tok.text in TYPE_WORDS:
            words.append(self.next().text)
        self.reject_unsupported()
        if not words:
            raise ParseError(start.loc, "type", str(start))
        is_const = "const" in words
        words = [w for w in words if w != "const"]
        if words == ["void"]:
            if not allow_void:
                raise ParseError(start.loc, "object type", "'void'")
            return None
        signed = None
        if "signed" in words or "unsigned" in words:
            if "signed" in words and "unsigned" in words:
                raise ParseError(start.loc, "type", "'signed unsigned'")
            signed = "signed" in words
            words = [w for w in words if w not in ("signed", "unsigned")]
        longs = words.count("long")
        rest = sorted(w for w in words if w != "long")
        if rest == ["int"] or rest == []:
            if not words and signed is None:
                raise ParseError(start.loc, "type", str(start))
            kind = {0: "int", 1: "long", 2: "longlong"}.get(longs)
            if rest == [] and longs == 0:
                kind = "int"
        elif rest == ["char"] and longs == 0:
            kind = "char"
        elif rest in (["short"], ["int", "short"]) and longs == 0:
            kind = "short"
        elif rest == ["float"] and longs == 0:
            kind = "float"
        elif rest == ["double"] and longs <= 1:
            kind = "longdouble" if longs else "double"
        else:
            kind = None
        if kind is None:
            raise ParseError(start.loc, "type", "'" + " ".join(words) + "'")
        if kind in ctype.REAL_KINDS and signed is not None:
            raise ParseError(start.loc, "type", f"'{'un' if not signed else ''}signed {kind}'")
        return CType(kind, True if signed is None else signed, is_const)

    # -- top level ---------------------------------------------------------

    def parse_program(self) -> list[ast.Function]:
        functions = []
        while self.tok.kind != "eof":
            functions.append(self.function())
        return functions

    def function(self) -> ast.Function:
        start = self.tok
        ret = self.type_spec(allow_void=True)
        if self.at("*"):
            raise UnsupportedFeature(self.tok.loc, "pointers")
        name = self.ident()
        if not self.at("("):
            if self.at("["):
                raise UnsupportedFeature(self.tok.loc, "arrays")
            if self.at("=", ";", ","):
                raise UnsupportedFeature(name.loc, "global variables")
            raise ParseError(self.tok.loc, "'('", str(self.tok))
        self.expect("(")
        if self.at("void") and self.peek().text == ")":
            self.next()
        if not self.at(")"):
            raise UnsupportedFeature(self.tok.loc, "function parameters")
        self.expect(")")
        if self.at(";"):
            raise UnsupportedFeature(self.tok.loc, "function declarations")
        body = self.compound()
        return ast.Function(name.text, tuple(body), ret, loc=start.loc)

    # -- statements --------------------------------------------------------

    def compound(self) -> list:
        self.expect("{")
        body = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise ParseError(self.tok.loc, "'}'", str(self.tok))
            body.extend(self.statement())
        self.expect("}")
        return body

    def sub_statement(self) -> tuple:
        """Body of if/while/for: a single statement kept as a tuple."""
        stmts = self.statement()
        if len(stmts) == 1 and isinstance(stmts[0], ast.Block):
            return stmts[0].body
        return tuple(stmts)

    def statement(self) -> list:
        t = self.tok
        loc = t.loc
        if self.at_type():
            return self.declaration()
        if t.kind == "ident" and self.peek().text == ":" and self.peek().kind == "punct":
            self.next()
            self.next()
            return [ast.Label(t.text, loc=loc)]
        if t.kind == "ident" and t.text == "MYASSERT" and self.peek().text == "(":
            self.next()
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            self.expect(";")
            return [ast.Assert(cond, loc=loc)]
        if self.at("{"):
            return [ast.Block(tuple(self.compound()), loc=loc)]
        if self.at(";"):
            self.next()
            return [ast.Block((), loc=loc)]
        if t.kind == "keyword":
            handler = getattr(self, "stmt_" + t.text, None)
            if handler is not None:
                self.next()
                return handler(loc)
        expr = self.expression()
        self.expect(";")
        return [ast.ExprStmt(expr, loc=loc)]

    def declaration(self) -> list:
        base = self.type_spec()
        decls = []
        while True:
            if self.at("*"):
                raise UnsupportedFeature(self.tok.loc, "pointers")
            name = self.ident()
            if self.at("["):
                raise UnsupportedFeature(self.tok.loc, "arrays")
            if self.at("("):
                raise UnsupportedFeature(self.tok.loc, "function declarations")
            init = None
            if self.at("="):
                self.next()
                init = self.assignment()
            decls.append(ast.Decl(name.text, base, init, loc=name.loc))
            if self.at(","):
                self.next()
                continue
            self.expect(";")
            return decls

    def stmt_if(self, loc):
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        then = self.sub_statement()
        other = None
        if self.at("else"):
            self.next()
            other = self.sub_statement()
        return [ast.If(cond, then, other, loc=loc)]

    def loop_body(self) -> tuple:
        self.loop_depth += 1
        try:
            return self.sub_statement()
        finally:
            self.loop_depth -= 1

    def stmt_while(self, loc):
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        return [ast.While(cond, self.loop_body(), loc=loc)]

    def stmt_do(self, loc):
        body = self.loop_body()
        self.expect("while")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        self.expect(";")
        return [ast.DoWhile(body, cond, loc=loc)]

    def stmt_for(self, loc):
        self.expect("(")
        if self.at(";"):
            self.next()
            init = ()
        elif self.at_type():
            init = tuple(self.declaration())
        else:
            init_loc = self.tok.loc
            init = (ast.ExprStmt(self.expression(), loc=init_loc),)
            self.expect(";")
        cond = None if self.at(";") else self.expression()
        self.expect(";")
        step = None if self.at(")") else self.expression()
        self.expect(")")
        return [ast.For(init, cond, step, self.loop_body(), loc=loc)]

    def stmt_break(self, loc):
        if self.loop_depth == 0 and self.switch_depth == 0:
            raise ParseError(loc, "break inside a loop or switch", "'break'")
        self.expect(";")
        return [ast.Break(loc=loc)]

    def stmt_continue(self, loc):
        if self.loop_depth == 0:
            raise ParseError(loc, "continue inside a loop", "'continue'")
        self.expect(";")
        return [ast.Continue(loc=loc)]

    def stmt_goto(self, loc):
        label = self.ident()
        self.expect(";")
        return [ast.Goto(label.text, loc=loc)]

    def stmt_return(self, loc):
        value = None if self.at(";") else self.expression()
        self.expect(";")
        return [ast.Return(value, loc=loc)]

    def stmt_switch(self, loc):
        self.expect("(")
        expr = self.expression()
        self.expect(")")
        self.switch_depth += 1
        saved, self.loop_depth = self.loop_depth, self.loop_depth
        try:
            if not self.at("{"):
                raise ParseError(self.tok.loc, "'{'", str(self.tok))
            body = self.compound()
        finally:
            self.switch_depth -= 1
            self.loop_depth = saved
        return [ast.Switch(expr, tuple(body), loc=loc)]

    def stmt_case(self, loc):
        if self.switch_depth == 0:
            raise ParseError(loc, "case inside a switch", "'case'")
        value = self.conditional()
        self.expect(":")
        return [ast.Case(value, loc=loc)]

    def stmt_default(self, loc):
        if self.switch_depth == 0:
            raise ParseError(loc, "default inside a switch", "'default'")
        self.expect(":")
        return [ast.Default(loc=loc)]

    def stmt_else(self, loc):
        raise ParseError(loc, "statement", "'else'")

    # -- expressions -------------------------------------------------------

    def expression(self):
        expr = self.assignment()
        if self.at(","):
            raise UnsupportedFeature(self.tok.loc, "comma operator")
        return expr

    def assignment(self):
        start = self.tok
        lhs = self.conditional()
        if self.at(*BITWISE_ASSIGN):
            raise UnsupportedFeature(self.tok.loc, "bitwise logical operators")
        if self.at(*ASSIGN_OPS):
            op = self.next().text
            if not isinstance(lhs, ast.VarRef):
                raise ParseError(start.loc, "variable on the left of assignment",
                                 "expression")
            value = self.assignment()
            if op == "=":
                return ast.Assign(lhs, value, loc=start.loc)
            return ast.CompoundAssign(op, lhs, value, loc=start.loc)
        return lhs

    def conditional(self):
        start = self.tok
        cond = self.logical_or()
        if self.at("?"):
            self.next()
            then = self.expression()
            self.expect(":")
            other = self.conditional()
            return ast.Conditional(cond, then, other, loc=start.loc)
        return cond

    def logical_or(self):
        start = self.tok
        lhs = self.logical_and()
        while self.at("||"):
            self.next()
            lhs = ast.Logical("||", lhs, self.logical_and(), loc=start.loc)
        return lhs

    def logical_and(self):
        start = self.tok
        lhs = self.binary(0)
        while self.at("&&"):
            self.next()
            lhs = ast.Logical("&&", lhs, self.binary(0), loc=start.loc)
        return lhs

    def binary(self, level: int):
        if level == len(BINARY_LEVELS):
            return self.unary()
        start = self.tok
        lhs = self.binary(level + 1)
        while True:
            if self.at("&", "|", "^"):
                raise UnsupportedFeature(self.tok.loc, "bitwise logical operators")
            if not self.at(*BINARY_LEVELS[level]):
                return lhs
            op = self.next().text
            lhs = ast.Binary(op, lhs, self.binary(level + 1), loc=start.loc)

    def unary(self):
        t = self.tok
        if self.at("+", "-", "!"):
            self.next()
            return ast.Unary(t.text, self.unary(), loc=t.loc)
        if self.at("++", "--"):
            self.next()
            operand = self.unary()
            if not isinstance(operand, ast.VarRef):
                raise ParseError(t.loc, "variable operand", "expression")
            return ast.Unary("pre" + t.text, operand, loc=t.loc)
        if self.at("~"):
            raise UnsupportedFeature(t.loc, "bitwise logical operators")
        if self.at("*", "&"):
            raise UnsupportedFeature(t.loc, "pointers")
        if self.at("(") and self.peek().kind == "keyword":
            nxt = self.peek().text
            if nxt in TYPE_WORDS or nxt in UNSUPPORTED_WORDS:
                self.next()
                to = self.type_spec()
                if self.at("*"):
                    raise UnsupportedFeature(self.tok.loc, "pointers")
                self.expect(")")
                return ast.Cast(to, self.unary(), loc=t.loc)
        return self.postfix()

    def postfix(self):
        expr = self.primary()
        while True:
            if self.at("++", "--"):
                t = self.next()
                if not isinstance(expr, ast.VarRef):
                    raise ParseError(t.loc, "variable operand", "expression")
                expr = ast.Unary("post" + t.text, expr, loc=expr.loc)
            elif self.at("["):
                raise UnsupportedFeature(self.tok.loc, "arrays")
            elif self.at(".", "->"):
                raise UnsupportedFeature(self.tok.loc, "structures and unions")
            else:
                return expr

    def primary(self):
        t = self.tok
        if t.kind == "int":
            self.next()
            return ast.IntLit(t.value, t.ctype, loc=t.loc)
        if t.kind == "real":
            self.next()
            return ast.RealLit(t.value, t.ctype, loc=t.loc)
        if t.kind == "ident":
            self.next()
            if self.at("("):
                if t.text == "MYASSERT":
                    raise ParseError(t.loc, "MYASSERT as a statement", "MYASSERT in an expression")
                raise UnsupportedFeature(t.loc, "function calls")
            return ast.VarRef(t.text, loc=t.loc)
        if self.at("("):
            self.next()
            expr = self.expression()
            self.expect(")")
            return expr
        self.reject_unsupported()
        raise ParseError(t.loc, "expression", str(t))


def parse(tokens: list[Token]) -> list[ast.Function]:
    return Parser(tokens).parse_program()
