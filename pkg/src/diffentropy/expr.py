"""
A small arithmetic language for drift and diffusion coefficients.

Grammar: numbers, the variable ``x``, named constants (``pi``, ``e`` and
any caller-supplied parameters), ``+ - * /``, ``^`` or ``**`` for powers,
unary minus and the functions ``exp``, ``log``, ``sqrt`` and ``abs``.
Expressions are parsed with :mod:`ast` and anything outside that whitelist
is rejected.
"""
import ast
import math
import operator

import numpy as np

__all__ = ["ExpressionError", "Expression", "parse_expression"]

_BINARY = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: np.power,
}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_FUNCS = {"exp": np.exp, "log": np.log, "sqrt": np.sqrt, "abs": np.abs}
_CONSTANTS = {"pi": math.pi, "e": math.e}


class ExpressionError(ValueError):
    pass


class Expression:
    """
    Compiled expression in the variable ``x``; callable on floats and arrays.

    Examples
    --------
    >>> f = parse_expression("-theta*(x - mu)", {"theta": 2.0, "mu": 1.0})
    >>> f(3.0)
    -4.0
    """

    def __init__(self, text, tree, constants):
        self.text = text
        self._tree = tree
        self._constants = constants

    def __repr__(self):
        return f"Expression({self.text!r})"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            out = self._eval(self._tree.body, x)
        out = np.broadcast_to(np.asarray(out, dtype=float), x.shape)
        return float(out) if out.ndim == 0 else np.array(out)

    def _eval(self, node, x):
        if isinstance(node, ast.Constant):
            return float(node.value)
        if isinstance(node, ast.Name):
            return x if node.id == "x" else self._constants[node.id]
        if isinstance(node, ast.BinOp):
            return _BINARY[type(node.op)](self._eval(node.left, x), self._eval(node.right, x))
        if isinstance(node, ast.UnaryOp):
            return _UNARY[type(node.op)](self._eval(node.operand, x))
        return _FUNCS[node.func.id](self._eval(node.args[0], x))


def _check(node, names):
    if isinstance(node, ast.Expression):
        return _check(node.body, names)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ExpressionError(f"unsupported literal {node.value!r}")
        return
    if isinstance(node, ast.Name):
        if node.id != "x" and node.id not in names:
            raise ExpressionError(f"unknown name {node.id!r}")
        return
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY:
        _check(node.left, names)
        _check(node.right, names)
        return
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        _check(node.operand, names)
        return
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS:
            raise ExpressionError("only exp, log, sqrt and abs may be called")
        if len(node.args) != 1 or node.keywords:
            raise ExpressionError(f"{node.func.id} takes exactly one argument")
        _check(node.args[0], names)
        return
    raise ExpressionError(f"unsupported syntax: {type(node).__name__}")


def parse_expression(text, constants=None):
    """
    Parse ``text`` into an :class:`Expression`.

    Parameters
    ----------
    text : str or number
    constants : mapping, optional
        Extra named constants; they shadow ``pi`` and ``e``.

    Raises
    ------
    ExpressionError
        On syntax errors or anything outside the grammar.
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        text = repr(float(text))
    if not isinstance(text, str):
        raise ExpressionError(f"expected an expression string, got {type(text).__name__}")
    names = dict(_CONSTANTS)
    names.update({k: float(v) for k, v in (constants or {}).items()})
    if "x" in names:
        raise ExpressionError("'x' is reserved for the state variable")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    _check(tree, names)
    return Expression(text, tree, names)
