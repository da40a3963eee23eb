"""Mini-expression language for ``function`` nodes.

Expressions see ``payload`` and ``topic`` and may use arithmetic, comparisons,
``and``/``or``/``not``, conditional expressions, subscripts and a few pure
builtins, e.g. ``(payload["temp"] - 32) * 5 / 9``.  The result replaces the
message payload.
"""

from __future__ import annotations

import ast
from functools import lru_cache
from typing import Any

from motflow.errors import ExpressionError

_CALLS: dict[str, Any] = {
    "abs": abs,
    "min": min,
    "max": max,
    "round": round,
    "float": float,
    "int": int,
    "str": str,
    "len": len,
    "bool": bool,
}
_NAMES = frozenset({"payload", "topic"})

_BOOL_OPS = (ast.And, ast.Or)
_BIN_OPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Mod, ast.FloorDiv)
_UNARY_OPS = (ast.Not, ast.UAdd, ast.USub)
_COMPARE_OPS = (ast.Eq, ast.NotEq, ast.Lt, ast.LtE, ast.Gt, ast.GtE)


def _check(node: ast.AST) -> None:
    if isinstance(node, ast.Expression):
        _check(node.body)
    elif isinstance(node, ast.BoolOp) and isinstance(node.op, _BOOL_OPS):
        for value in node.values:
            _check(value)
    elif isinstance(node, ast.BinOp) and isinstance(node.op, _BIN_OPS):
        _check(node.left)
        _check(node.right)
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, _UNARY_OPS):
        _check(node.operand)
    elif isinstance(node, ast.Compare) and all(isinstance(op, _COMPARE_OPS) for op in node.ops):
        _check(node.left)
        for comparator in node.comparators:
            _check(comparator)
    elif isinstance(node, ast.IfExp):
        _check(node.test)
        _check(node.body)
        _check(node.orelse)
    elif isinstance(node, ast.Subscript):
        if isinstance(node.slice, ast.Slice):
            raise ExpressionError("Slices are not allowed in expressions.")
        _check(node.value)
        _check(node.slice)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _CALLS:
            raise ExpressionError(f"Call not permitted: {ast.unparse(node.func)}")
        if node.keywords:
            raise ExpressionError("Keyword arguments are not allowed in expressions.")
        for arg in node.args:
            _check(arg)
    elif isinstance(node, ast.Name):
        if node.id not in _NAMES and node.id not in _CALLS:
            raise ExpressionError(f"Unknown name '{node.id}' (expressions see payload and topic).")
    elif isinstance(node, ast.Constant):
        if not (isinstance(node.value, (int, float, str, bool)) or node.value is None):
            raise ExpressionError("Unsupported constant in expression.")
    elif isinstance(node, (ast.List, ast.Tuple)):
        for element in node.elts:
            _check(element)
    else:
        raise ExpressionError(f"Unsupported expression element: {type(node).__name__}")


@lru_cache(maxsize=256)
def compile_expression(source: str):
    """Parse and whitelist-check *source*; the code object is cached."""
    try:
        tree = ast.parse(source.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"Invalid expression {source!r}: {exc.msg}") from exc
    _check(tree)
    return compile(tree, "<function node>", "eval")


def evaluate(source: str, payload: Any, topic: str = "") -> Any:
    code = compile_expression(source)
    scope = dict(_CALLS, payload=payload, topic=topic)
    try:
        return eval(code, {"__builtins__": {}}, scope)  # noqa: S307 - whitelisted AST
    except Exception as exc:
        raise ExpressionError(f"Expression {source!r} failed: {exc}") from exc
