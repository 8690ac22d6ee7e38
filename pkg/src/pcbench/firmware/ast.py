"""Syntax tree for firmware programs.  Every node records its source position."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass
class Node:
    line: int
    col: int


# -- expressions -----------------------------------------------------------

@dataclass
class Literal(Node):
    value: object


@dataclass
class Name(Node):
    id: str


@dataclass
class Index(Node):
    target: "Expr"
    index: "Expr"


@dataclass
class Unary(Node):
    op: str
    operand: "Expr"


@dataclass
class Binary(Node):
    op: str
    left: "Expr"
    right: "Expr"


@dataclass
class Logical(Node):
    op: str  # "&&" or "||"
    left: "Expr"
    right: "Expr"


@dataclass
class Ternary(Node):
    cond: "Expr"
    then: "Expr"
    other: "Expr"


@dataclass
class Assign(Node):
    op: str  # "=", "+=", ...
    target: "Expr"
    value: "Expr"


@dataclass
class IncDec(Node):
    op: str  # "++" or "--"
    target: "Expr"
    prefix: bool


@dataclass
class Call(Node):
    func: str  # plain name, or "Serial.print" style for the serial object
    args: list["Expr"]


@dataclass
class MethodCall(Node):
    obj: "Expr"
    method: str
    args: list["Expr"]


@dataclass
class InitList(Node):
    items: list["Expr"]


Expr = Union[Literal, Name, Index, Unary, Binary, Logical, Ternary, Assign, IncDec, Call,
             MethodCall, InitList]


# -- statements ------------------------------------------------------------

@dataclass
class VarDecl(Node):
    type: str
    name: str
    size: Optional[Expr] = None  # arrays: int pins[4]
    is_array: bool = False
    init: Optional[Expr] = None
    const: bool = False


@dataclass
class DeclGroup(Node):
    decls: list[VarDecl]


@dataclass
class Block(Node):
    body: list["Stmt"]


@dataclass
class If(Node):
    cond: Expr
    then: "Stmt"
    other: Optional["Stmt"] = None


@dataclass
class While(Node):
    cond: Expr
    body: "Stmt"


@dataclass
class DoWhile(Node):
    body: "Stmt"
    cond: Expr


@dataclass
class For(Node):
    init: Optional["Stmt"]
    cond: Optional[Expr]
    step: Optional[Expr]
    body: "Stmt"


@dataclass
class Break(Node):
    pass


@dataclass
class Continue(Node):
    pass


@dataclass
class Return(Node):
    value: Optional[Expr] = None


@dataclass
class ExprStmt(Node):
    expr: Expr


@dataclass
class Empty(Node):
    pass


Stmt = Union[VarDecl, DeclGroup, Block, If, While, DoWhile, For, Break, Continue, Return,
             ExprStmt, Empty]


@dataclass
class Param:
    type: str
    name: str
    is_array: bool = False


@dataclass
class Function(Node):
    ret_type: str
    name: str
    params: list[Param]
    body: Block


@dataclass
class Program:
    globals: list[VarDecl] = field(default_factory=list)
    functions: dict[str, Function] = field(default_factory=dict)
    source: str = ""
