"""A small, safe arithmetic evaluator over exact values.

Expressions use ``^`` or ``**`` for powers and may call a fixed set of
functions.  Nothing is ever passed to ``eval``; the input is parsed with
:mod:`ast` and walked node by node.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .errors import UndeclaredParameter
from .scalar import (
    ParamPoly,
    RatFunc,
    bar,
    declared_parameters,
    quantum_integer,
    substitute_tr,
)

_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _as_exponent(x):
    if _is_rational(x):
        return x
    if isinstance(x, RatFunc) and x.is_constant():
        c = x.constant()
        if c.is_constant():
            return c.constant()
    raise ValueError(f"exponent must be a rational number, got {x}")


def _power(base, exp):
    exp = _as_exponent(exp)
    if isinstance(exp, Fraction) and exp.denominator == 1:
        exp = exp.numerator
    if _is_rational(base):
        if isinstance(exp, Fraction):
            raise ValueError(f"fractional power of a number: {base}^{exp}")
        return Fraction(base) ** exp
    return base ** exp


def _divide(a, b):
    if _is_rational(a) and _is_rational(b):
        return Fraction(a, 1) / b
    return a / b


class Evaluator:
    def __init__(self, names: Mapping[str, object], funcs: Mapping[str, Callable], fallback: Optional[Callable[[str], object]] = None):
        self.names = names
        self.funcs = funcs
        self.fallback = fallback

    def __call__(self, text: str):
        src = str(text).replace("^", "**")
        try:
            tree = ast.parse(src, mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse {text!r}: {exc.msg}") from None
        return self.visit(tree.body)

    def visit(self, node):
        if isinstance(node, ast.Constant):
            v = node.value
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ValueError(f"unsupported literal {v!r}")
            if isinstance(v, float):
                return Fraction(repr(v))
            return v
        if isinstance(node, ast.Name):
            if node.id in self.names:
                return self.names[node.id]
            if self.fallback is not None:
                return self.fallback(node.id)
            raise UndeclaredParameter(node.id)
        if isinstance(node, ast.UnaryOp):
            v = self.visit(node.operand)
            if isinstance(node.op, ast.USub):
                return -v
            if isinstance(node.op, ast.UAdd):
                return v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _BINOPS):
            a = self.visit(node.left)
            b = self.visit(node.right)
            op = node.op
            if isinstance(op, ast.Add):
                return a + b
            if isinstance(op, ast.Sub):
                return a - b
            if isinstance(op, ast.Mult):
                return a * b
            if isinstance(op, ast.Div):
                return _divide(a, b)
            return _power(a, b)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
            fn = self.funcs.get(node.func.id)
            if fn is None:
                raise ValueError(f"unknown function {node.func.id!r}")
            return fn(*[self.visit(a) for a in node.args])
        raise ValueError(f"unsupported syntax: {ast.dump(node)}")


def int_arg(x) -> int:
    x = _as_exponent(x)
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError(f"expected an integer, got {x}")
        return x.numerator
    return x


def scalar_functions() -> dict:
    return {
        "qint": lambda n: quantum_integer(int_arg(n)),
        "bar": lambda f: bar(RatFunc.coerce(f)),
        "tr": lambda f, r: substitute_tr(RatFunc.coerce(f), int_arg(r)),
    }


def param_fallback(name: str):
    if name in declared_parameters():
        return RatFunc.coerce(ParamPoly.symbol(name))
    raise UndeclaredParameter(name)


def scalar_names(bindings: Optional[Mapping[str, object]] = None) -> dict:
    names = {"s": RatFunc.s_power(1), "t": RatFunc.s_power(2)}
    if bindings:
        names.update(bindings)
    return names


def parse_scalar(
    text,
    bindings: Optional[Mapping[str, object]] = None,
    funcs: Optional[Mapping[str, Callable]] = None,
) -> RatFunc:
    """Parse a scalar expression (canonical strings included) into a RatFunc.

    ``bindings`` map integer-valued names (``P2``, ``r``, ...) or parameters to
    concrete values; remaining parameter names become symbols.  ``funcs`` adds
    callable helpers to the default ``qint``, ``bar`` and ``tr``.
    """
    if isinstance(text, (int, Fraction)):
        return RatFunc.coerce(text)
    fns = scalar_functions()
    if funcs:
        fns.update(funcs)
    ev = Evaluator(scalar_names(bindings), fns, param_fallback)
    return RatFunc.coerce(ev(text))


def parse_number(text, bindings: Optional[Mapping[str, object]] = None) -> Fraction:
    """Parse an expression that must reduce to a rational number (weights, multiplicities)."""
    if _is_rational(text):
        return Fraction(text)
    ev = Evaluator(dict(bindings or {}), {}, None)
    v = ev(str(text))
    if isinstance(v, RatFunc):
        v = _as_exponent(v)
    if not _is_rational(v):
        raise ValueError(f"{text!r} is not a number")
    return Fraction(v)
