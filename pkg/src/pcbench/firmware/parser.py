"""Recursive-descent parser for the firmware language (grammar in docs/grammar.md)."""

from __future__ import annotations

from typing import Iterable, Optional

from . import ast
from .lexer import FirmwareSyntaxError, Token, tokenize

TYPE_WORDS = {"void", "int", "long", "short", "byte", "char", "float", "double",
              "bool", "boolean", "String", "unsigned"}
QUALIFIERS = {"const", "static"}

# name -> (min args, max args)
BUILTINS = {
    "pinMode": (2, 2), "digitalWrite": (2, 2), "digitalRead": (1, 1),
    "analogRead": (1, 1), "analogWrite": (2, 2),
    "delay": (1, 1), "delayMicroseconds": (1, 1), "millis": (0, 0), "micros": (0, 0),
    "tone": (2, 2), "noTone": (1, 1), "servoAttach": (1, 1), "servoWrite": (2, 2),
    "dhtRead": (2, 2),
    "map": (5, 5), "constrain": (3, 3), "abs": (1, 1), "min": (2, 2), "max": (2, 2),
    "String": (0, 1),
    "Serial.begin": (0, 1), "Serial.print": (1, 1), "Serial.println": (0, 1),
    "Serial.available": (0, 0), "Serial.readLine": (0, 0),
}
STRING_METHODS = {"length": 0, "toInt": 0, "toFloat": 0, "trim": 0, "equals": 1}

LANGUAGE_CONSTANTS = {"HIGH": 1, "LOW": 0, "INPUT": 0, "OUTPUT": 1, "INPUT_PULLUP": 2}

_ASSIGN_OPS = ("=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=")
_BINARY_LEVELS = [
    ("|",), ("^",), ("&",), ("==", "!="), ("<", "<=", ">", ">="), ("<<", ">>"),
    ("+", "-"), ("*", "/", "%"),
]


def normalize_type(words: list[str]) -> str:
    if "String" in words:
        return "String"
    if "void" in words:
        return "void"
    if "float" in words or "double" in words:
        return "float"
    if "bool" in words or "boolean" in words:
        return "bool"
    return "int"


class Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    # -- token helpers ----------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message: str, tok: Optional[Token] = None) -> FirmwareSyntaxError:
        tok = tok or self.tok
        return FirmwareSyntaxError(message, tok.line, tok.col)

    def expect_op(self, op: str) -> Token:
        if not self.tok.is_op(op):
            raise self.error(f"expected {op!r}, found {self.tok.describe()}")
        return self.next()

    def expect_ident(self) -> Token:
        if self.tok.kind != "IDENT":
            raise self.error(f"expected a name, found {self.tok.describe()}")
        return self.next()

    def at_type(self) -> bool:
        t = self.tok
        return t.kind == "KW" and (t.value in TYPE_WORDS or t.value in QUALIFIERS)

    def parse_type(self) -> tuple[str, bool]:
        const = False
        words = []
        while self.tok.kind == "KW" and (self.tok.value in TYPE_WORDS or self.tok.value in QUALIFIERS):
            word = self.next().value
            if word == "const":
                const = True
            elif word != "static":
                words.append(word)
        if not words:
            raise self.error(f"expected a type, found {self.tok.describe()}")
        return normalize_type(words), const

    # -- top level ----------------------------------------------------------
    def parse_program(self) -> ast.Program:
        program = ast.Program()
        while self.tok.kind != "EOF":
            if not self.at_type():
                raise self.error(f"expected a declaration, found {self.tok.describe()}")
            start = self.tok
            type_, const = self.parse_type()
            name = self.expect_ident()
            if self.tok.is_op("("):
                func = self.parse_function(type_, name)
                if func.name in program.functions:
                    raise FirmwareSyntaxError(f"duplicate function {func.name!r}", name.line, name.col)
                program.functions[func.name] = func
            else:
                group = self.parse_declarators(type_, const, name, start)
                program.globals.extend(group.decls)
        return program

    def parse_function(self, ret_type: str, name: Token) -> ast.Function:
        self.expect_op("(")
        params: list[ast.Param] = []
        if self.tok.is_kw("void") and self.peek().is_op(")"):
            self.next()
        elif not self.tok.is_op(")"):
            while True:
                ptype, _ = self.parse_type()
                pname = self.expect_ident().value
                is_array = False
                if self.tok.is_op("["):
                    self.next()
                    self.expect_op("]")
                    is_array = True
                params.append(ast.Param(ptype, pname, is_array))
                if not self.tok.is_op(","):
                    break
                self.next()
        self.expect_op(")")
        body = self.parse_block()
        return ast.Function(name.line, name.col, ret_type, name.value, params, body)

    def parse_declarators(self, type_: str, const: bool, first: Token, start: Token) -> ast.DeclGroup:
        decls = []
        name = first
        while True:
            if type_ == "void":
                raise self.error("variables cannot have type void", name)
            decl = ast.VarDecl(name.line, name.col, type_, name.value, const=const)
            if self.tok.is_op("["):
                self.next()
                decl.is_array = True
                if not self.tok.is_op("]"):
                    decl.size = self.parse_expr()
                self.expect_op("]")
            if self.tok.is_op("="):
                self.next()
                decl.init = self.parse_init_list() if self.tok.is_op("{") else self.parse_assign()
            if decl.is_array and decl.size is None and not isinstance(decl.init, ast.InitList):
                raise self.error("array needs a size or an initializer list", name)
            decls.append(decl)
            if not self.tok.is_op(","):
                break
            self.next()
            name = self.expect_ident()
        self.expect_op(";")
        return ast.DeclGroup(start.line, start.col, decls)

    def parse_init_list(self) -> ast.InitList:
        start = self.expect_op("{")
        items = []
        while not self.tok.is_op("}"):
            items.append(self.parse_assign())
            if not self.tok.is_op(","):
                break
            self.next()
        self.expect_op("}")
        return ast.InitList(start.line, start.col, items)

    # -- statements ---------------------------------------------------------
    def parse_block(self) -> ast.Block:
        start = self.expect_op("{")
        body = []
        while not self.tok.is_op("}"):
            if self.tok.kind == "EOF":
                raise self.error("missing '}' before end of input")
            body.append(self.parse_statement())
        self.next()
        return ast.Block(start.line, start.col, body)

    def parse_statement(self) -> ast.Stmt:
        t = self.tok
        if t.is_op("{"):
            return self.parse_block()
        if t.is_op(";"):
            self.next()
            return ast.Empty(t.line, t.col)
        if self.at_type():
            type_, const = self.parse_type()
            return self.parse_declarators(type_, const, self.expect_ident(), t)
        if t.is_kw("if"):
            self.next()
            self.expect_op("(")
            cond = self.parse_expr()
            self.expect_op(")")
            then = self.parse_statement()
            other = None
            if self.tok.is_kw("else"):
                self.next()
                other = self.parse_statement()
            return ast.If(t.line, t.col, cond, then, other)
        if t.is_kw("while"):
            self.next()
            self.expect_op("(")
            cond = self.parse_expr()
            self.expect_op(")")
            return ast.While(t.line, t.col, cond, self.parse_statement())
        if t.is_kw("do"):
            self.next()
            body = self.parse_statement()
            if not self.tok.is_kw("while"):
                raise self.error(f"expected 'while', found {self.tok.describe()}")
            self.next()
            self.expect_op("(")
            cond = self.parse_expr()
            self.expect_op(")")
            self.expect_op(";")
            return ast.DoWhile(t.line, t.col, body, cond)
        if t.is_kw("for"):
            return self.parse_for()
        if t.is_kw("break", "continue"):
            self.next()
            self.expect_op(";")
            return (ast.Break if t.value == "break" else ast.Continue)(t.line, t.col)
        if t.is_kw("return"):
            self.next()
            value = None if self.tok.is_op(";") else self.parse_expr()
            self.expect_op(";")
            return ast.Return(t.line, t.col, value)
        if t.is_kw("else"):
            raise self.error("'else' without a matching 'if'")
        expr = self.parse_expr()
        self.expect_op(";")
        return ast.ExprStmt(t.line, t.col, expr)

    def parse_for(self) -> ast.For:
        t = self.next()
        self.expect_op("(")
        init: Optional[ast.Stmt] = None
        if self.tok.is_op(";"):
            self.next()
        elif self.at_type():
            start = self.tok
            type_, const = self.parse_type()
            init = self.parse_declarators(type_, const, self.expect_ident(), start)
        else:
            e = self.tok
            init = ast.ExprStmt(e.line, e.col, self.parse_expr())
            self.expect_op(";")
        cond = None if self.tok.is_op(";") else self.parse_expr()
        self.expect_op(";")
        step = None if self.tok.is_op(")") else self.parse_expr()
        self.expect_op(")")
        return ast.For(t.line, t.col, init, cond, step, self.parse_statement())

    # -- expressions --------------------------------------------------------
    def parse_expr(self) -> ast.Expr:
        return self.parse_assign()

    def parse_assign(self) -> ast.Expr:
        left = self.parse_ternary()
        if self.tok.kind == "OP" and self.tok.value in _ASSIGN_OPS:
            op = self.next()
            if not isinstance(left, (ast.Name, ast.Index)):
                raise self.error("left side of assignment is not assignable", op)
            return ast.Assign(op.line, op.col, op.value, left, self.parse_assign())
        return left

    def parse_ternary(self) -> ast.Expr:
        cond = self.parse_logical_or()
        if self.tok.is_op("?"):
            q = self.next()
            then = self.parse_assign()
            self.expect_op(":")
            other = self.parse_assign()
            return ast.Ternary(q.line, q.col, cond, then, other)
        return cond

    def parse_logical_or(self) -> ast.Expr:
        left = self.parse_logical_and()
        while self.tok.is_op("||"):
            op = self.next()
            left = ast.Logical(op.line, op.col, "||", left, self.parse_logical_and())
        return left

    def parse_logical_and(self) -> ast.Expr:
        left = self.parse_binary(0)
        while self.tok.is_op("&&"):
            op = self.next()
            left = ast.Logical(op.line, op.col, "&&", left, self.parse_binary(0))
        return left

    def parse_binary(self, level: int) -> ast.Expr:
        if level == len(_BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_binary(level + 1)
        ops = _BINARY_LEVELS[level]
        while self.tok.kind == "OP" and self.tok.value in ops:
            op = self.next()
            left = ast.Binary(op.line, op.col, op.value, left, self.parse_binary(level + 1))
        return left

    def parse_unary(self) -> ast.Expr:
        t = self.tok
        if t.is_op("!", "-", "+", "~"):
            self.next()
            return ast.Unary(t.line, t.col, t.value, self.parse_unary())
        if t.is_op("++", "--"):
            self.next()
            target = self.parse_unary()
            if not isinstance(target, (ast.Name, ast.Index)):
                raise self.error(f"operand of {t.value} is not assignable", t)
            return ast.IncDec(t.line, t.col, t.value, target, True)
        if t.is_op("(") and self.peek().kind == "KW" and self.peek().value in TYPE_WORDS:
            self.next()
            type_, _ = self.parse_type()
            self.expect_op(")")
            return ast.Unary(t.line, t.col, f"cast:{type_}", self.parse_unary())
        return self.parse_postfix()

    def parse_postfix(self) -> ast.Expr:
        expr = self.parse_primary()
        while True:
            t = self.tok
            if t.is_op("["):
                self.next()
                index = self.parse_expr()
                self.expect_op("]")
                expr = ast.Index(t.line, t.col, expr, index)
            elif t.is_op("++", "--"):
                if not isinstance(expr, (ast.Name, ast.Index)):
                    raise self.error(f"operand of {t.value} is not assignable", t)
                self.next()
                expr = ast.IncDec(t.line, t.col, t.value, expr, False)
            elif t.is_op("."):
                self.next()
                method = self.expect_ident()
                args = self.parse_args()
                if isinstance(expr, ast.Name) and expr.id == "Serial":
                    expr = ast.Call(expr.line, expr.col, f"Serial.{method.value}", args)
                else:
                    expr = ast.MethodCall(method.line, method.col, expr, method.value, args)
            else:
                return expr

    def parse_args(self) -> list[ast.Expr]:
        self.expect_op("(")
        args = []
        if not self.tok.is_op(")"):
            while True:
                args.append(self.parse_assign())
                if not self.tok.is_op(","):
                    break
                self.next()
        self.expect_op(")")
        return args

    def parse_primary(self) -> ast.Expr:
        t = self.tok
        if t.kind in ("INT", "FLOAT", "STRING"):
            self.next()
            return ast.Literal(t.line, t.col, t.value)
        if t.is_kw("true", "false"):
            self.next()
            return ast.Literal(t.line, t.col, t.value == "true")
        if t.is_kw("String") and self.peek().is_op("("):
            self.next()
            return ast.Call(t.line, t.col, "String", self.parse_args())
        if t.kind == "IDENT":
            self.next()
            if self.tok.is_op("("):
                return ast.Call(t.line, t.col, t.value, self.parse_args())
            return ast.Name(t.line, t.col, t.value)
        if t.is_op("("):
            self.next()
            expr = self.parse_expr()
            self.expect_op(")")
            return expr
        raise self.error(f"unexpected {t.describe()}")


class _Resolver:
    """Checks that names, calls and arities resolve; raises FirmwareSyntaxError."""

    def __init__(self, program: ast.Program, constants: Iterable[str]):
        self.program = program
        # name -> read-only flag, innermost scope last
        self.scopes: list[dict[str, bool]] = [dict.fromkeys(constants, True)]
        self.loop_depth = 0

    def fail(self, node: ast.Node, message: str) -> None:
        raise FirmwareSyntaxError(message, node.line, node.col)

    def declare(self, node: ast.Node, name: str, const: bool = False) -> None:
        if name in self.scopes[-1] and len(self.scopes) > 1:
            self.fail(node, f"{name!r} is already declared in this scope")
        if name in self.program.functions:
            self.fail(node, f"{name!r} is already a function")
        self.scopes[-1][name] = const

    def read_only(self, name: str) -> bool:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return False

    def run(self) -> None:
        globals_ = set()
        for decl in self.program.globals:
            if decl.name in globals_:
                self.fail(decl, f"duplicate global {decl.name!r}")
            self.expr(decl.size)
            self.expr(decl.init)
            globals_.add(decl.name)
            self.declare(decl, decl.name, decl.const)
        for fn in self.program.functions.values():
            if fn.name in BUILTINS:
                self.fail(fn, f"function {fn.name!r} shadows a builtin")
            self.scopes.append({p.name: False for p in fn.params})
            if len(self.scopes[-1]) != len(fn.params):
                self.fail(fn, f"duplicate parameter in {fn.name!r}")
            self.stmt(fn.body, new_scope=False)
            self.scopes.pop()

    def stmt(self, node: Optional[ast.Stmt], new_scope: bool = True) -> None:
        if node is None:
            return
        if isinstance(node, ast.Block):
            if new_scope:
                self.scopes.append({})
            for s in node.body:
                self.stmt(s)
            if new_scope:
                self.scopes.pop()
        elif isinstance(node, ast.DeclGroup):
            for d in node.decls:
                self.expr(d.size)
                self.expr(d.init)
                self.declare(d, d.name, d.const)
        elif isinstance(node, ast.If):
            self.expr(node.cond)
            self.stmt(node.then)
            self.stmt(node.other)
        elif isinstance(node, (ast.While, ast.DoWhile)):
            self.expr(node.cond)
            self.loop_depth += 1
            self.stmt(node.body)
            self.loop_depth -= 1
        elif isinstance(node, ast.For):
            self.scopes.append({})
            self.stmt(node.init, new_scope=False)
            self.expr(node.cond)
            self.expr(node.step)
            self.loop_depth += 1
            self.stmt(node.body)
            self.loop_depth -= 1
            self.scopes.pop()
        elif isinstance(node, (ast.Break, ast.Continue)):
            if not self.loop_depth:
                self.fail(node, f"{type(node).__name__.lower()} outside a loop")
        elif isinstance(node, ast.Return):
            self.expr(node.value)
        elif isinstance(node, ast.ExprStmt):
            self.expr(node.expr)

    def expr(self, node: Optional[ast.Expr]) -> None:
        if node is None or isinstance(node, ast.Literal):
            return
        if isinstance(node, ast.Name):
            if not any(node.id in scope for scope in self.scopes):
                self.fail(node, f"undeclared name {node.id!r}")
        elif isinstance(node, (ast.Assign, ast.IncDec)):
            base = node.target
            while isinstance(base, ast.Index):
                base = base.target
            if isinstance(base, ast.Name) and self.read_only(base.id):
                self.fail(node, f"cannot assign to const {base.id!r}")
            for child in vars(node).values():
                if isinstance(child, ast.Node):
                    self.expr(child)  # type: ignore[arg-type]
        elif isinstance(node, ast.Call):
            if node.func in self.program.functions:
                fn = self.program.functions[node.func]
                lo = hi = len(fn.params)
            elif node.func in BUILTINS:
                lo, hi = BUILTINS[node.func]
            else:
                self.fail(node, f"unknown function {node.func!r}")
            if not lo <= len(node.args) <= hi:
                self.fail(node, f"{node.func} takes {lo if lo == hi else f'{lo}-{hi}'} "
                                f"arguments, got {len(node.args)}")
            for a in node.args:
                self.expr(a)
        elif isinstance(node, ast.MethodCall):
            if node.method not in STRING_METHODS:
                self.fail(node, f"unknown method {node.method!r}")
            if len(node.args) != STRING_METHODS[node.method]:
                self.fail(node, f"{node.method} takes {STRING_METHODS[node.method]} arguments")
            self.expr(node.obj)
            for a in node.args:
                self.expr(a)
        elif isinstance(node, ast.InitList):
            for item in node.items:
                self.expr(item)
        else:
            for child in vars(node).values():
                if isinstance(child, ast.Node):
                    self.expr(child)  # type: ignore[arg-type]


class FirmwareProgramError(FirmwareSyntaxError):
    """Structural problems: missing setup/loop, duplicate definitions."""


def parse_program(source: str, constants: Iterable[str] = ()) -> ast.Program:
    """Parse and resolve a firmware program.

    ``constants`` names extra predefined integers (board pin aliases such as
    ``A0``) on top of HIGH/LOW/INPUT/OUTPUT/INPUT_PULLUP.
    """
    program = Parser(source).parse_program()
    program.source = source
    for required in ("setup", "loop"):
        if required not in program.functions:
            raise FirmwareProgramError(f"program does not define {required}()", 1, 1)
        fn = program.functions[required]
        if fn.params:
            raise FirmwareProgramError(f"{required}() must take no parameters", fn.line, fn.col)
    _Resolver(program, set(LANGUAGE_CONSTANTS) | set(constants)).run()
    return program
