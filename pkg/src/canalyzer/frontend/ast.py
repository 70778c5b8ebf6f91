"""Typed abstract syntax for the mini-C subset.

Nodes are frozen dataclasses.  Source locations and resolved types are
excluded from equality so that structurally identical trees compare equal
regardless of where they came from.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, is_dataclass, replace
from fractions import Fraction
from typing import Iterator, Optional, Union

from ..ctype import CType


@dataclass(frozen=True)
class SourceLoc:
    file: str
    line: int
    column: int

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError(f"invalid source location {self.line}:{self.column}")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


NOLOC = SourceLoc("<generated>", 1, 1)


def _loc():
    return field(default=NOLOC, compare=False, repr=False)


def _type():
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class IntLit:
    value: int
    type: Optional[CType] = _type()
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class RealLit:
    value: Fraction
    type: Optional[CType] = _type()
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class VarRef:
    name: str
    type: Optional[CType] = _type()
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Unary:
    # one of + - ! pre++ post++ pre-- post--
    op: str
    operand: "Expr"
    type: Optional[CType] = _type()
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Binary:
    # arithmetic, shift, relational and equality operators
    op: str
    lhs: "Expr"
    rhs: "Expr"
    type: Optional[CType] = _type()
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Logical:
    op: str  # && or ||
    lhs: "Expr"
    rhs: "Expr"
    type: Optional[CType] = _type()
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Conditional:
    cond: "Expr"
    then: "Expr"
    other: "Expr"
    type: Optional[CType] = _type()
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Assign:
    target: VarRef
    value: "Expr"
    type: Optional[CType] = _type()
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class CompoundAssign:
    op: str  # += -= *= /= %= <<= >>=
    target: VarRef
    value: "Expr"
    # type the operation is carried out in, set by the type checker
    compute_type: Optional[CType] = _type()
    type: Optional[CType] = _type()
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Cast:
    to: CType
    operand: "Expr"
    # IntegralCast, FloatingCast, IntegralToFloating, FloatingToIntegral
    kind: Optional[str] = field(default=None, compare=False)
    implicit: bool = False
    type: Optional[CType] = _type()
    loc: SourceLoc = _loc()


Expr = Union[IntLit, RealLit, VarRef, Unary, Binary, Logical, Conditional,
             Assign, CompoundAssign, Cast]

ARITH_OPS = ("+", "-", "*", "/", "%")
SHIFT_OPS = ("<<", ">>")
REL_OPS = ("<", "<=", ">", ">=", "==", "!=")
INC_OPS = ("pre++", "post++", "pre--", "post--")


# ---------------------------------------------------------------------------
# statements


@dataclass(frozen=True)
class Decl:
    name: str
    ctype: CType
    init: Optional[Expr] = None
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple
    other: Optional[tuple] = None
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class DoWhile:
    body: tuple
    cond: Expr
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class For:
    init: tuple  # statements (declarations or one expression statement)
    cond: Optional[Expr]
    step: Optional[Expr]
    body: tuple
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Break:
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Continue:
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Goto:
    label: str
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Label:
    name: str
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Assert:
    cond: Expr
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Return:
    value: Optional[Expr] = None
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Block:
    body: tuple
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Switch:
    expr: Expr
    body: tuple
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Case:
    value: Expr
    loc: SourceLoc = _loc()


@dataclass(frozen=True)
class Default:
    loc: SourceLoc = _loc()


Stmt = Union[Decl, ExprStmt, If, While, DoWhile, For, Break, Continue, Goto,
             Label, Assert, Return, Block, Switch, Case, Default]


@dataclass(frozen=True)
class Function:
    name: str
    body: tuple
    return_type: Optional[CType] = None  # None means void
    # (name, CType) pairs after scope flattening, in declaration order
    variables: tuple = ()
    loc: SourceLoc = _loc()

    def var_types(self) -> dict:
        return dict(self.variables)


# ---------------------------------------------------------------------------
# generic traversal helpers


def children(node) -> Iterator:
    """Direct AST children of ``node`` (expressions and statements)."""
    for f in fields(node):
        if f.name in ("loc", "type", "compute_type", "to", "ctype", "return_type"):
            continue
        value = getattr(node, f.name)
        if isinstance(value, tuple):
            for item in value:
                if is_dataclass(item):
                    yield item
        elif is_dataclass(value):
            yield value


def walk(node) -> Iterator:
    """Pre-order traversal over ``node`` and all its descendants."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(list(children(current))))


def walk_stmts(stmts) -> Iterator:
    for stmt in stmts:
        yield from walk(stmt)


def strip_locs(node):
    """Copy of ``node`` with every location reset, for structural dumps."""
    if isinstance(node, tuple):
        return tuple(strip_locs(n) for n in node)
    if not is_dataclass(node) or isinstance(node, (SourceLoc, CType)):
        return node
    changes = {}
    for f in fields(node):
        value = getattr(node, f.name)
        if f.name == "loc":
            changes["loc"] = NOLOC
        elif isinstance(value, tuple) or is_dataclass(value):
            changes[f.name] = strip_locs(value)
    return replace(node, **changes)


def reads(expr) -> set:
    """Names of variables read by ``expr`` (assignment targets excluded)."""
    names = set()

    def visit(e):
        if isinstance(e, VarRef):
            names.add(e.name)
        elif isinstance(e, Assign):
            visit(e.value)
        elif isinstance(e, CompoundAssign):
            names.add(e.target.name)
            visit(e.value)
        else:
            for c in children(e):
                visit(c)

    visit(expr)
    return names


def has_side_effects(expr) -> bool:
    for e in walk(expr):
        if isinstance(e, (Assign, CompoundAssign)):
            return True
        if isinstance(e, Unary) and e.op in INC_OPS:
            return True
    return False
