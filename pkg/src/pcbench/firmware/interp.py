"""Tree-walking interpreter for firmware programs.

The interpreter never touches hardware.  :meth:`Interpreter.run` is a
generator that yields a :class:`HalCall` for every side effect and expects the
call's result to be sent back.  Whoever drives the generator owns the clock.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Generator, Mapping, NamedTuple, Protocol

from . import ast
from .parser import LANGUAGE_CONSTANTS

IDLE_TICK_US = 100
DEFAULT_STEP_BUDGET = 10_000_000
# deeper user-function recursion is reported as a stack overflow
MAX_CALL_DEPTH = 48

_INT_MIN, _INT_SPAN = -(2 ** 63), 2 ** 64


class HalCall(NamedTuple):
    name: str
    args: tuple


class _LoopStart:
    def __repr__(self) -> str:
        return "LOOP_START"


LOOP_START = _LoopStart()


class HalContract(Protocol):
    def pin_mode(self, pin: int, mode: int) -> None: ...
    def digital_write(self, pin: int, level: int) -> None: ...
    def digital_read(self, pin: int) -> int: ...
    def analog_read(self, pin: int) -> int: ...
    def analog_write(self, pin: int, value: int) -> None: ...
    def now_micros(self) -> int: ...
    def sleep(self, micros: int) -> None: ...
    def serial_write(self, text: str) -> None: ...
    def serial_available(self) -> int: ...
    def serial_read_line(self) -> str: ...
    def tone(self, pin: int, hz: int) -> None: ...
    def no_tone(self, pin: int) -> None: ...
    def servo_attach(self, pin: int) -> None: ...
    def servo_write(self, pin: int, degrees: int) -> None: ...
    def read_dht(self, pin: int, field: str) -> float: ...


class FirmwareRuntimeError(Exception):
    def __init__(self, message: str, node: ast.Node | None = None):
        self.message = message
        self.line = node.line if node else 0
        self.col = node.col if node else 0
        where = f"line {self.line}, column {self.col}: " if node else ""
        super().__init__(where + message)


class StepBudgetExceeded(FirmwareRuntimeError):
    pass


class _Break(Exception):
    pass


class _Continue(Exception):
    pass


class _Return(Exception):
    def __init__(self, value: Any):
        self.value = value


class Var:
    __slots__ = ("type", "value", "const")

    def __init__(self, type_: str, value: Any, const: bool = False):
        self.type, self.value, self.const = type_, value, const


def wrap_int(x: int) -> int:
    return (x - _INT_MIN) % _INT_SPAN + _INT_MIN


def format_value(v: Any) -> str:
    """Text form used by Serial.print."""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.2f}"
    return str(v)


def _type_name(v: Any) -> str:
    if isinstance(v, bool):
        return "bool"
    if isinstance(v, int):
        return "int"
    if isinstance(v, float):
        return "float"
    if isinstance(v, str):
        return "String"
    return "array" if isinstance(v, list) else type(v).__name__


def coerce(type_: str, v: Any, node: ast.Node) -> Any:
    """Convert ``v`` for storage in a variable declared as ``type_``."""
    if type_ == "String":
        if not isinstance(v, str):
            raise FirmwareRuntimeError(f"cannot store {_type_name(v)} in a String", node)
        return v
    if isinstance(v, str) or isinstance(v, list):
        raise FirmwareRuntimeError(f"cannot store {_type_name(v)} in {type_}", node)
    if type_ == "int":
        if isinstance(v, float):
            if math.isnan(v) or math.isinf(v):
                return 0
            return wrap_int(int(v))
        return int(v)
    if type_ == "float":
        return float(v)
    if type_ == "bool":
        return v != 0
    raise FirmwareRuntimeError(f"cannot store a value in {type_}", node)


def _num(v: Any, node: ast.Node, op: str) -> int | float:
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, (int, float)):
        return v
    raise FirmwareRuntimeError(f"operator {op!r} is not defined for {_type_name(v)}", node)


def _int_only(v: Any, node: ast.Node, op: str) -> int:
    v = _num(v, node, op)
    if isinstance(v, float):
        raise FirmwareRuntimeError(f"operator {op!r} needs integer operands", node)
    return v


def truthy(v: Any, node: ast.Node) -> bool:
    if isinstance(v, str):
        raise FirmwareRuntimeError("a String is not a condition", node)
    return _num(v, node, "condition") != 0


def binop(op: str, a: Any, b: Any, node: ast.Node) -> Any:
    if op in ("==", "!="):
        if isinstance(a, str) or isinstance(b, str):
            if not (isinstance(a, str) and isinstance(b, str)):
                raise FirmwareRuntimeError("cannot compare a String with a number", node)
            return (a == b) if op == "==" else (a != b)
        x, y = _num(a, node, op), _num(b, node, op)
        return (x == y) if op == "==" else (x != y)
    if op == "+" and isinstance(a, str) and isinstance(b, str):
        return a + b
    if op in ("<", "<=", ">", ">="):
        if isinstance(a, str) and isinstance(b, str):
            x, y = a, b
        else:
            x, y = _num(a, node, op), _num(b, node, op)
        return {"<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[op]  # type: ignore[operator]
    if op in ("&", "|", "^", "<<", ">>"):
        x, y = _int_only(a, node, op), _int_only(b, node, op)
        if op == "&":
            return x & y
        if op == "|":
            return x | y
        if op == "^":
            return x ^ y
        if y < 0 or y >= 64:
            raise FirmwareRuntimeError(f"shift count {y} out of range", node)
        return wrap_int(x << y) if op == "<<" else x >> y
    x, y = _num(a, node, op), _num(b, node, op)
    is_float = isinstance(x, float) or isinstance(y, float)
    if op == "+":
        r = x + y
    elif op == "-":
        r = x - y
    elif op == "*":
        r = x * y
    elif op == "/":
        if y == 0:
            raise FirmwareRuntimeError("division by zero", node)
        if is_float:
            return x / y
        q = abs(x) // abs(y)
        return wrap_int(q if (x >= 0) == (y >= 0) else -q)
    elif op == "%":
        if is_float:
            raise FirmwareRuntimeError("operator '%' needs integer operands", node)
        if y == 0:
            raise FirmwareRuntimeError("division by zero", node)
        r = abs(x) % abs(y)
        return r if x >= 0 else -r
    else:
        raise FirmwareRuntimeError(f"unknown operator {op!r}", node)
    return r if is_float else wrap_int(r)


def unop(op: str, v: Any, node: ast.Node) -> Any:
    if op == "!":
        return not truthy(v, node)
    if op.startswith("cast:"):
        return coerce(op[5:], v, node)
    if op == "~":
        return ~_int_only(v, node, op)
    x = _num(v, node, op)
    if op == "-":
        return -x if isinstance(x, float) else wrap_int(-x)
    return x


def arduino_map(x: int, in_lo: int, in_hi: int, out_lo: int, out_hi: int, node: ast.Node) -> int:
    if in_hi == in_lo:
        raise FirmwareRuntimeError("map() with an empty input range", node)
    num = (x - in_lo) * (out_hi - out_lo)
    den = in_hi - in_lo
    q = abs(num) // abs(den)
    return wrap_int((q if (num >= 0) == (den >= 0) else -q) + out_lo)


def _pure_builtin(name: str, args: list, node: ast.Node) -> Any:
    if name == "map":
        ints = [_num(a, node, "map") for a in args]
        return arduino_map(*[int(v) for v in ints], node=node)
    if name == "constrain":
        x, lo, hi = (_num(a, node, name) for a in args)
        return lo if x < lo else hi if x > hi else x
    if name == "abs":
        x = _num(args[0], node, name)
        return abs(x)
    if name in ("min", "max"):
        x, y = (_num(a, node, name) for a in args)
        return min(x, y) if name == "min" else max(x, y)
    if name == "String":
        return format_value(args[0]) if args else ""
    raise KeyError(name)


PURE_BUILTINS = {"map", "constrain", "abs", "min", "max", "String"}


def _string_method(obj: Any, method: str, args: list, node: ast.Node) -> Any:
    if not isinstance(obj, str):
        raise FirmwareRuntimeError(f"{_type_name(obj)} has no method {method!r}", node)
    if method == "length":
        return len(obj)
    if method == "trim":
        return obj.strip()
    if method == "equals":
        return isinstance(args[0], str) and obj == args[0]
    if method in ("toInt", "toFloat"):
        text = obj.strip()
        # leading numeric prefix, 0 when there is none
        end = 0
        allowed = "0123456789" + ("." if method == "toFloat" else "")
        if text[:1] in "+-":
            end = 1
        while end < len(text) and text[end] in allowed:
            end += 1
        try:
            return int(text[:end]) if method == "toInt" else float(text[:end])
        except ValueError:
            return 0 if method == "toInt" else 0.0
    raise FirmwareRuntimeError(f"unknown method {method!r}", node)


def _validate_dht_field(v: Any, node: ast.Node) -> str:
    if v not in ("temperature", "humidity"):
        raise FirmwareRuntimeError('dhtRead field must be "temperature" or "humidity"', node)
    return v


class Interpreter:
    """Executes one program.  One instance per simulation run."""

    def __init__(self, program: ast.Program, constants: Mapping[str, int] | None = None,
                 step_budget: int = DEFAULT_STEP_BUDGET):
        self.program = program
        self.constants = dict(LANGUAGE_CONSTANTS)
        self.constants.update(constants or {})
        self.step_budget = step_budget
        self.steps = 0
        self.loop_iterations = 0
        self.globals: dict[str, Var] = {}
        self.scopes: list[dict[str, Var]] = []
        self._slept = False
        self._pure: dict[int, bool] = {}
        self._depth = 0

    # -- driver entry ---------------------------------------------------------
    def run(self) -> Generator[Any, Any, None]:
        saved, self.scopes = self.scopes, []
        for decl in self.program.globals:
            yield from self._declare(decl, self.globals)
        self.scopes = saved
        yield from self._call_user("setup", [], self.program.functions["setup"])
        loop = self.program.functions["loop"]
        while True:
            yield LOOP_START
            self.loop_iterations += 1
            self._slept = False
            yield from self._call_user("loop", [], loop)
            if not self._slept:
                yield HalCall("sleep", (IDLE_TICK_US,))

    # -- variables ------------------------------------------------------------
    def _lookup(self, name: str, node: ast.Node) -> Var:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        if name in self.globals:
            return self.globals[name]
        raise FirmwareRuntimeError(f"undeclared name {name!r}", node)

    def _declare(self, decl: ast.VarDecl, scope: dict[str, Var]):
        if decl.is_array:
            items: list = []
            if isinstance(decl.init, ast.InitList):
                for item in decl.init.items:
                    items.append(coerce(decl.type, (yield from self._eval(item)), item))
            size = len(items)
            if decl.size is not None:
                size = yield from self._eval(decl.size)
                if not isinstance(size, int) or isinstance(size, bool) or size < 0:
                    raise FirmwareRuntimeError("array size must be a non-negative integer", decl)
                if len(items) > size:
                    raise FirmwareRuntimeError("too many initializers for array", decl)
            zero = {"int": 0, "float": 0.0, "bool": False, "String": ""}[decl.type]
            items += [zero] * (size - len(items))
            scope[decl.name] = Var(decl.type, items, decl.const)
            return
        if isinstance(decl.init, ast.InitList):
            raise FirmwareRuntimeError("initializer list for a non-array", decl)
        if decl.init is None:
            value = {"int": 0, "float": 0.0, "bool": False, "String": ""}[decl.type]
        else:
            value = coerce(decl.type, (yield from self._eval(decl.init)), decl.init)
        scope[decl.name] = Var(decl.type, value, decl.const)

    # -- statements -------------------------------------------------------------
    def _exec(self, node: ast.Stmt):
        self.steps += 1
        if self.steps > self.step_budget:
            raise StepBudgetExceeded(
                f"step budget of {self.step_budget} statements exhausted", node)
        kind = type(node)
        if kind is ast.ExprStmt:
            yield from self._eval(node.expr)
        elif kind is ast.Block:
            self.scopes.append({})
            try:
                for s in node.body:
                    yield from self._exec(s)
            finally:
                self.scopes.pop()
        elif kind is ast.If:
            if truthy((yield from self._eval(node.cond)), node.cond):
                yield from self._exec(node.then)
            elif node.other is not None:
                yield from self._exec(node.other)
        elif kind is ast.DeclGroup:
            for d in node.decls:
                yield from self._declare(d, self.scopes[-1])
        elif kind is ast.While:
            while truthy((yield from self._eval(node.cond)), node.cond):
                try:
                    yield from self._exec(node.body)
                except _Break:
                    break
                except _Continue:
                    pass
        elif kind is ast.For:
            self.scopes.append({})
            try:
                if node.init is not None:
                    yield from self._exec(node.init)
                while node.cond is None or truthy((yield from self._eval(node.cond)), node.cond):
                    try:
                        yield from self._exec(node.body)
                    except _Break:
                        break
                    except _Continue:
                        pass
                    if node.step is not None:
                        yield from self._eval(node.step)
            finally:
                self.scopes.pop()
        elif kind is ast.DoWhile:
            while True:
                try:
                    yield from self._exec(node.body)
                except _Break:
                    break
                except _Continue:
                    pass
                if not truthy((yield from self._eval(node.cond)), node.cond):
                    break
        elif kind is ast.Return:
            value = None if node.value is None else (yield from self._eval(node.value))
            raise _Return(value)
        elif kind is ast.Break:
            raise _Break()
        elif kind is ast.Continue:
            raise _Continue()
        elif kind is ast.Empty:
            pass
        else:
            raise FirmwareRuntimeError(f"cannot execute {kind.__name__}", node)

    def _call_user(self, name: str, args: list, fn: ast.Function):
        if self._depth >= MAX_CALL_DEPTH:
            raise FirmwareRuntimeError(f"call depth above {MAX_CALL_DEPTH} in {name}()", fn)
        frame: dict[str, Var] = {}
        for param, value in zip(fn.params, args):
            if param.is_array:
                if not isinstance(value, list):
                    raise FirmwareRuntimeError(f"{name}() expects an array for {param.name!r}", fn)
                frame[param.name] = Var(param.type, value)
            else:
                frame[param.name] = Var(param.type, coerce(param.type, value, fn))
        saved, self.scopes = self.scopes, [frame]
        self._depth += 1
        try:
            yield from self._exec(fn.body)
            result = None
        except _Return as r:
            result = r.value
        finally:
            self.scopes = saved
            self._depth -= 1
        if fn.ret_type == "void":
            return None
        if result is None:
            raise FirmwareRuntimeError(f"{name}() ended without returning a value", fn)
        return coerce(fn.ret_type, result, fn)

    # -- expressions --------------------------------------------------------------
    def _is_pure(self, node: ast.Expr) -> bool:
        key = id(node)
        cached = self._pure.get(key)
        if cached is None:
            cached = _pure_expr(node)
            self._pure[key] = cached
        return cached

    def _eval(self, node: ast.Expr):
        """Generator form; pure subtrees short-cut to :meth:`_value`."""
        if self._is_pure(node):
            return self._value(node)
        kind = type(node)
        if kind is ast.Call:
            args = []
            for a in node.args:
                args.append((yield from self._eval(a)))
            return (yield from self._call(node, args))
        if kind is ast.Binary:
            left = yield from self._eval(node.left)
            right = yield from self._eval(node.right)
            return binop(node.op, left, right, node)
        if kind is ast.Logical:
            left = truthy((yield from self._eval(node.left)), node.left)
            if node.op == "&&" and not left:
                return False
            if node.op == "||" and left:
                return True
            return truthy((yield from self._eval(node.right)), node.right)
        if kind is ast.Unary:
            return unop(node.op, (yield from self._eval(node.operand)), node)
        if kind is ast.Ternary:
            if truthy((yield from self._eval(node.cond)), node.cond):
                return (yield from self._eval(node.then))
            return (yield from self._eval(node.other))
        if kind is ast.Assign:
            value = yield from self._eval(node.value)
            index = (yield from self._eval(node.target.index)) if isinstance(node.target, ast.Index) else None
            return self._assign(node, value, index)
        if kind is ast.IncDec:
            index = (yield from self._eval(node.target.index)) if isinstance(node.target, ast.Index) else None
            return self._incdec(node, index)
        if kind is ast.Index:
            index = yield from self._eval(node.index)
            return self._index(node, index)
        if kind is ast.MethodCall:
            obj = yield from self._eval(node.obj)
            args = []
            for a in node.args:
                args.append((yield from self._eval(a)))
            return _string_method(obj, node.method, args, node)
        raise FirmwareRuntimeError(f"cannot evaluate {kind.__name__}", node)

    def _value(self, node: ast.Expr) -> Any:
        """Plain evaluation for subtrees without side-effecting calls."""
        kind = type(node)
        if kind is ast.Literal:
            return node.value
        if kind is ast.Name:
            name = node.id
            for scope in reversed(self.scopes):
                if name in scope:
                    return scope[name].value
            if name in self.globals:
                return self.globals[name].value
            if name in self.constants:
                return self.constants[name]
            raise FirmwareRuntimeError(f"undeclared name {name!r}", node)
        if kind is ast.Binary:
            return binop(node.op, self._value(node.left), self._value(node.right), node)
        if kind is ast.Logical:
            left = truthy(self._value(node.left), node.left)
            if node.op == "&&" and not left:
                return False
            if node.op == "||" and left:
                return True
            return truthy(self._value(node.right), node.right)
        if kind is ast.Unary:
            return unop(node.op, self._value(node.operand), node)
        if kind is ast.Ternary:
            branch = node.then if truthy(self._value(node.cond), node.cond) else node.other
            return self._value(branch)
        if kind is ast.Assign:
            value = self._value(node.value)
            index = self._value(node.target.index) if isinstance(node.target, ast.Index) else None
            return self._assign(node, value, index)
        if kind is ast.IncDec:
            index = self._value(node.target.index) if isinstance(node.target, ast.Index) else None
            return self._incdec(node, index)
        if kind is ast.Index:
            return self._index(node, self._value(node.index))
        if kind is ast.Call:
            return _pure_builtin(node.func, [self._value(a) for a in node.args], node)
        if kind is ast.MethodCall:
            return _string_method(self._value(node.obj), node.method,
                                  [self._value(a) for a in node.args], node)
        if kind is ast.InitList:
            raise FirmwareRuntimeError("initializer list outside a declaration", node)
        raise FirmwareRuntimeError(f"cannot evaluate {kind.__name__}", node)

    def _shadowed(self, name: str) -> bool:
        return name in self.globals or any(name in s for s in self.scopes)

    def _target(self, target: ast.Expr) -> Var:
        name = target.id if isinstance(target, ast.Name) else None
        if isinstance(target, ast.Index):
            if not isinstance(target.target, ast.Name):
                raise FirmwareRuntimeError("only named arrays can be indexed", target)
            name = target.target.id
        if name in self.constants and not self._shadowed(name):
            raise FirmwareRuntimeError(f"cannot assign to constant {name!r}", target)
        var = self._lookup(name, target)  # type: ignore[arg-type]
        if var.const:
            raise FirmwareRuntimeError(f"cannot assign to const {name!r}", target)
        return var

    def _element(self, var: Var, index: Any, node: ast.Node) -> int:
        if not isinstance(var.value, list):
            raise FirmwareRuntimeError("indexing a non-array", node)
        if not isinstance(index, int) or isinstance(index, bool):
            raise FirmwareRuntimeError("array index must be an integer", node)
        if not 0 <= index < len(var.value):
            raise FirmwareRuntimeError(f"array index {index} out of bounds (size {len(var.value)})", node)
        return index

    def _store(self, target: ast.Expr, var: Var, value: Any, index: Any) -> Any:
        if isinstance(target, ast.Index):
            i = self._element(var, index, target)
            var.value[i] = coerce(var.type, value, target)
            return var.value[i]
        if isinstance(var.value, list):
            raise FirmwareRuntimeError("cannot assign to a whole array", target)
        var.value = coerce(var.type, value, target)
        return var.value

    def _load(self, target: ast.Expr, var: Var, index: Any) -> Any:
        if isinstance(target, ast.Index):
            return var.value[self._element(var, index, target)]
        return var.value

    def _assign(self, node: ast.Assign, value: Any, index: Any) -> Any:
        var = self._target(node.target)
        if node.op != "=":
            value = binop(node.op[:-1], self._load(node.target, var, index), value, node)
        return self._store(node.target, var, value, index)

    def _incdec(self, node: ast.IncDec, index: Any) -> Any:
        var = self._target(node.target)
        old = self._load(node.target, var, index)
        new = binop("+" if node.op == "++" else "-", old, 1, node)
        stored = self._store(node.target, var, new, index)
        return stored if node.prefix else old

    def _index(self, node: ast.Index, index: Any) -> Any:
        if not isinstance(node.target, ast.Name):
            raise FirmwareRuntimeError("only named arrays can be indexed", node)
        var = self._lookup(node.target.id, node)
        return var.value[self._element(var, index, node)]

    def _call(self, node: ast.Call, args: list):
        name = node.func
        fn = self.program.functions.get(name)
        if fn is not None:
            return (yield from self._call_user(name, args, fn))
        if name in PURE_BUILTINS:
            return _pure_builtin(name, args, node)
        return (yield from self._hal_builtin(name, args, node))

    def _hal_builtin(self, name: str, args: list, node: ast.Call):
        def integer(v: Any) -> int:
            if isinstance(v, str):
                raise FirmwareRuntimeError(f"{name}() expects a number, got a String", node)
            return int(_num(v, node, name))

        if name == "pinMode":
            return (yield HalCall("pin_mode", (integer(args[0]), integer(args[1]))))
        if name == "digitalWrite":
            return (yield HalCall("digital_write", (integer(args[0]), 1 if integer(args[1]) else 0)))
        if name == "digitalRead":
            return (yield HalCall("digital_read", (integer(args[0]),)))
        if name == "analogRead":
            return (yield HalCall("analog_read", (integer(args[0]),)))
        if name == "analogWrite":
            value = max(0, min(255, integer(args[1])))
            return (yield HalCall("analog_write", (integer(args[0]), value)))
        if name in ("delay", "delayMicroseconds"):
            amount = integer(args[0])
            if amount < 0:
                raise FirmwareRuntimeError(f"{name}() with a negative duration", node)
            self._slept = True
            return (yield HalCall("sleep", (amount * 1000 if name == "delay" else amount,)))
        if name == "millis":
            return (yield HalCall("now_micros", ())) // 1000
        if name == "micros":
            return (yield HalCall("now_micros", ()))
        if name == "tone":
            return (yield HalCall("tone", (integer(args[0]), integer(args[1]))))
        if name == "noTone":
            return (yield HalCall("no_tone", (integer(args[0]),)))
        if name == "servoAttach":
            return (yield HalCall("servo_attach", (integer(args[0]),)))
        if name == "servoWrite":
            degrees = max(0, min(180, integer(args[1])))
            return (yield HalCall("servo_write", (integer(args[0]), degrees)))
        if name == "dhtRead":
            return (yield HalCall("read_dht", (integer(args[0]), _validate_dht_field(args[1], node))))
        if name == "Serial.begin":
            return None
        if name in ("Serial.print", "Serial.println"):
            text = format_value(args[0]) if args else ""
            if name == "Serial.println":
                text += "\n"
            return (yield HalCall("serial_write", (text,)))
        if name == "Serial.available":
            return (yield HalCall("serial_available", ()))
        if name == "Serial.readLine":
            return (yield HalCall("serial_read_line", ()))
        raise FirmwareRuntimeError(f"unknown function {name!r}", node)


def _pure_expr(node: Any) -> bool:
    if isinstance(node, ast.Call):
        if node.func not in PURE_BUILTINS:
            return False
    elif isinstance(node, ast.InitList):
        return False
    for child in vars(node).values():
        if isinstance(child, ast.Node) and not _pure_expr(child):
            return False
        if isinstance(child, list) and not all(_pure_expr(c) for c in child):
            return False
    return True


@dataclass
class RunReport:
    loop_iterations: int
    end_micros: int
    steps: int
    hal_calls: int


def run_until(program: ast.Program, hal: HalContract, t_end: int,
              constants: Mapping[str, int] | None = None,
              step_budget: int = DEFAULT_STEP_BUDGET) -> RunReport:
    """Run setup() once and loop() repeatedly until the clock reaches ``t_end`` (µs).

    Sleeps are clipped at ``t_end``.  Runtime errors propagate.
    """
    interp = Interpreter(program, constants, step_budget)
    gen = interp.run()
    calls = 0
    result: Any = None
    while True:
        request = gen.send(result)
        result = None
        if request is LOOP_START:
            if hal.now_micros() >= t_end:
                break
            continue
        calls += 1
        if request.name == "sleep":
            now = hal.now_micros()
            hal.sleep(max(0, min(request.args[0], t_end - now)))
            if hal.now_micros() >= t_end:
                break
            continue
        result = getattr(hal, request.name)(*request.args)
    gen.close()
    return RunReport(interp.loop_iterations, hal.now_micros(), interp.steps, calls)
