"""Numeric evaluator for the optional `exact_solution` field of problem
files.

Closed-form solutions may involve the Mittag-Leffler function, which the
core expression grammar deliberately does not model, so this small
evaluator accepts the same operators plus `ml(alpha, beta, z)` and the
bound names `t` and `alpha`.  Strings are compiled through a whitelisted
Python AST (with `^` meaning power, as everywhere else in this package).
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Mapping

from .specfun import mittag_leffler

__all__ = ["ExactSolution"]

_ALLOWED_CALLS = {
    "exp": math.exp,
    "ln": math.log,
    "sin": math.sin,
    "cos": math.cos,
    "sqrt": math.sqrt,
    "max": max,
    "step": lambda u: 1.0 if u > 0 else 0.0,
    "ml": lambda a, b, z: mittag_leffler(float(a), float(z), beta=float(b)),
}

_ALLOWED_NODES = (
    ast.Expression,
    ast.BinOp,
    ast.UnaryOp,
    ast.Add,
    ast.Sub,
    ast.Mult,
    ast.Div,
    ast.Pow,
    ast.USub,
    ast.UAdd,
    ast.Call,
    ast.Name,
    ast.Constant,
    ast.Load,
)


class ExactSolution:
    """Compiled exact-solution expression; call with a spatial binding and t."""

    def __init__(self, text: str, constants: Mapping[str, object], alpha: float):
        self.text = text
        self.alpha = float(alpha)
        self._consts = {k: float(v) for k, v in constants.items()}
        self._tree = ast.parse(text.replace("^", "**"), mode="eval")
        for node in ast.walk(self._tree):
            if not isinstance(node, _ALLOWED_NODES):
                raise ValueError(
                    f"unsupported syntax {type(node).__name__} in exact solution"
                )
            if isinstance(node, ast.Call):
                if not isinstance(node.func, ast.Name) or node.func.id not in _ALLOWED_CALLS:
                    raise ValueError("only exp/ln/sin/cos/sqrt/max/step/ml calls are allowed")
            if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
                raise ValueError(f"non-numeric literal {node.value!r}")

    def with_alpha(self, alpha: float) -> "ExactSolution":
        return ExactSolution(self.text, self._consts, alpha)

    def __call__(self, binding: Mapping[str, float], t: float) -> float:
        env = dict(self._consts)
        env.update({k: float(v) for k, v in binding.items()})
        env["t"] = float(t)
        env["alpha"] = self.alpha
        return self._eval(self._tree.body, env)

    def _eval(self, node, env):
        if isinstance(node, ast.Constant):
            return float(node.value)
        if isinstance(node, ast.Name):
            try:
                return env[node.id]
            except KeyError:
                raise ValueError(f"unbound name {node.id!r} in exact solution") from None
        if isinstance(node, ast.UnaryOp):
            v = self._eval(node.operand, env)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a = self._eval(node.left, env)
            b = self._eval(node.right, env)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
            if isinstance(node.op, ast.Pow):
                return a**b
        if isinstance(node, ast.Call):
            fn = _ALLOWED_CALLS[node.func.id]
            return float(fn(*(self._eval(a, env) for a in node.args)))
        raise ValueError(f"unsupported syntax {type(node).__name__}")
