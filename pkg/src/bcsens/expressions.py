"""Tiny arithmetic expression language for config files.

Expressions are parsed with the stdlib ``ast`` module and compiled to
numpy-vectorised closures.  Only a whitelisted grammar is accepted:

    numbers, the declared variables, ``pi`` and ``e``,
    + - * / ** and unary minus,
    exp, log, sin, cos, sqrt, tanh (single argument).

Anything else (attribute access, comparisons, other names or calls) is
rejected with a ConfigError, so untrusted config files cannot execute code.
"""

from __future__ import annotations

import ast
import math
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError

_FUNCTIONS = {
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "sqrt": np.sqrt,
    "tanh": np.tanh,
}

_CONSTANTS = {"pi": math.pi, "e": math.e}

_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
    ast.Pow: np.power,
}


def _compile_node(node: ast.AST, variables: Sequence[str]) -> Callable:
    if isinstance(node, ast.Expression):
        return _compile_node(node.body, variables)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            value = float(node.value)
            return lambda env: value
        raise ConfigError(f"literal {node.value!r} is not a number")
    if isinstance(node, ast.Name):
        if node.id in variables:
            name = node.id
            return lambda env: env[name]
        if node.id in _CONSTANTS:
            value = _CONSTANTS[node.id]
            return lambda env: value
        raise ConfigError(f"unknown name {node.id!r}; allowed: {', '.join(variables)}, pi, e")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile_node(node.operand, variables)
        if isinstance(node.op, ast.UAdd):
            return inner
        return lambda env: np.negative(inner(env))
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        left = _compile_node(node.left, variables)
        right = _compile_node(node.right, variables)
        return lambda env: op(left(env), right(env))
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
            raise ConfigError("only exp/log/sin/cos/sqrt/tanh calls are allowed")
        if len(node.args) != 1 or node.keywords:
            raise ConfigError(f"{node.func.id} takes exactly one positional argument")
        fn = _FUNCTIONS[node.func.id]
        arg = _compile_node(node.args[0], variables)
        return lambda env: fn(arg(env))
    raise ConfigError(f"unsupported syntax: {ast.dump(node, include_attributes=False)[:80]}")


def compile_expression(source: str, variables: Sequence[str] = ("t",)) -> Callable:
    """Compile ``source`` into ``f(*values)`` over the given variables.

    The returned callable broadcasts over numpy arrays.  Example::

        f = compile_expression("0.5 + 0.25*sin(3*pi*t)", ("t",))
        f(np.linspace(0, 1, 5))
    """
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {source!r}: {exc.msg}") from exc
    evaluator = _compile_node(tree, tuple(variables))
    names = tuple(variables)

    def fn(*values):
        if len(values) != len(names):
            raise TypeError(f"expected {len(names)} argument(s) {names}, got {len(values)}")
        env = dict(zip(names, values))
        out = evaluator(env)
        # keep scalar-in/scalar-out while staying array-friendly
        if np.isscalar(out) or (isinstance(out, np.ndarray) and out.ndim == 0):
            return float(out)
        return out

    fn.source = source
    fn.variables = names
    return fn
