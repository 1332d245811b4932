"""Arithmetic expressions and predicates over natural-number variables.

Infix syntax over identifiers and decimal literals: + - * and parentheses;
predicates add == != < <= > >= && || !.  Subtraction truncates at zero so
every expression denotes a total map into the naturals.
"""

from __future__ import annotations

import ast
import operator
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping


class ExpressionError(ValueError):
    pass


_ARITH = {
    ast.Add: operator.add,
    ast.Sub: lambda a, b: max(a - b, 0),
    ast.Mult: operator.mul,
}
_CMP = {
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
}


def _translate(text: str) -> str:
    if re.search(r"\b(and|or|not|if|else|lambda)\b", text):
        raise ExpressionError(f"reserved word in expression: {text!r}")
    text = text.replace("&&", " and ").replace("||", " or ")
    return re.sub(r"!(?!=)", " not ", text)


@dataclass(frozen=True)
class Expr:
    text: str
    variables: frozenset
    boolean: bool
    _fn: Callable = field(compare=False, repr=False)

    def __call__(self, env: Mapping[str, int]):
        return self._fn(env)


def _compile(node, names: set):
    """Returns (closure, is_boolean)."""
    if isinstance(node, ast.Constant) and type(node.value) is int and node.value >= 0:
        v = node.value
        return (lambda env: v), False
    if isinstance(node, ast.Name):
        n = node.id
        names.add(n)
        return (lambda env: env[n]), False
    if isinstance(node, ast.BinOp) and type(node.op) in _ARITH:
        f = _ARITH[type(node.op)]
        (l, lb), (r, rb) = _compile(node.left, names), _compile(node.right, names)
        if lb or rb:
            raise ExpressionError("arithmetic on a boolean")
        return (lambda env: f(l(env), r(env))), False
    if isinstance(node, ast.Compare):
        parts = [_compile(node.left, names)] + [_compile(c, names) for c in node.comparators]
        if any(b for _, b in parts):
            raise ExpressionError("comparison of booleans")
        ops = []
        for op in node.ops:
            if type(op) not in _CMP:
                raise ExpressionError(f"unsupported comparison {type(op).__name__}")
            ops.append(_CMP[type(op)])
        fns = [fn for fn, _ in parts]

        def cmp(env):
            vals = [fn(env) for fn in fns]
            return all(op(vals[k], vals[k + 1]) for k, op in enumerate(ops))

        return cmp, True
    if isinstance(node, ast.BoolOp):
        parts = [_compile(v, names) for v in node.values]
        if not all(b for _, b in parts):
            raise ExpressionError("&& and || need boolean operands")
        fns = [fn for fn, _ in parts]
        if isinstance(node.op, ast.And):
            return (lambda env: all(fn(env) for fn in fns)), True
        return (lambda env: any(fn(env) for fn in fns)), True
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
        fn, b = _compile(node.operand, names)
        if not b:
            raise ExpressionError("! needs a boolean operand")
        return (lambda env: not fn(env)), True
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse_expr(text: str, boolean: bool = False) -> Expr:
    """Compile `text`; `boolean` selects a predicate rather than a number."""
    try:
        tree = ast.parse(_translate(text), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"malformed expression {text!r}: {exc.msg}") from None
    names: set = set()
    fn, is_bool = _compile(tree.body, names)
    if is_bool != boolean:
        want = "a predicate" if boolean else "a numeric expression"
        raise ExpressionError(f"{text!r} is not {want}")
    return Expr(text.strip(), frozenset(names), is_bool, fn)
