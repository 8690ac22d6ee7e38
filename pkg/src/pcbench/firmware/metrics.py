"""Static size and complexity measures for firmware sources."""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import ast

_BLOCK_COMMENT = re.compile(r"/\*.*?\*/", re.DOTALL)
_STRING = re.compile(r'"(?:\\.|[^"\\\n])*"')


@dataclass(frozen=True)
class CodeMetrics:
    lines_of_code: int
    cyclomatic_complexity: int


def _strip_comments(source: str) -> str:
    # Hide string contents first so "//" inside a literal survives.
    literals: list[str] = []

    def stash(m: re.Match) -> str:
        literals.append(m.group(0))
        return f'"\0{len(literals) - 1}\0"'

    text = _STRING.sub(stash, source)
    # keep newlines of block comments so line structure is preserved
    text = _BLOCK_COMMENT.sub(lambda m: "\n" * m.group(0).count("\n") + " ", text)
    text = re.sub(r"//[^\n]*", "", text)
    return text


def lines_of_code(source: str) -> int:
    """Lines that still hold code once comments are removed."""
    return sum(1 for line in _strip_comments(source).splitlines() if line.strip())


def _decisions(node: object) -> int:
    count = 0
    if isinstance(node, (ast.If, ast.While, ast.DoWhile, ast.For, ast.Logical, ast.Ternary)):
        count += 1
    if isinstance(node, ast.Node) or isinstance(node, ast.Function):
        children = vars(node).values()
    elif isinstance(node, list):
        children = node
    else:
        return count
    for child in children:
        if isinstance(child, (ast.Node, list)):
            count += _decisions(child)
    return count


def cyclomatic_complexity(program: ast.Program) -> int:
    """1 + decision points over the whole program.

    Decision points: each ``if`` (so each ``else if``), ``while``, ``do``,
    ``for``, ``&&``, ``||`` and ``?:``.
    """
    total = 1
    for decl in program.globals:
        total += _decisions(decl)
    for fn in program.functions.values():
        total += _decisions(fn)
    return total


def code_metrics(program: ast.Program) -> CodeMetrics:
    return CodeMetrics(lines_of_code(program.source), cyclomatic_complexity(program))
