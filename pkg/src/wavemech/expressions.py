"""Small arithmetic-expression evaluator for profile strings like
"1+0.1*x" or "0.5*x^2", used by the command-line tools to accept refractive
and potential profiles without code.

Grammar: numbers, the variable x, binary + - * / ^, unary minus, parentheses,
and the functions sin, cos, exp, sqrt.  Parsing is the shunting-yard
algorithm; evaluation applies numpy elementwise, so x may be an array.
"""
from __future__ import annotations

import re

import numpy as np

__all__ = ["ExpressionError", "evaluate_expression"]


class ExpressionError(ValueError):
    """Malformed or unsupported expression text."""


_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]+)"
    r"|(?P<op>[-+*/^()]))"
)

_FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "sqrt": np.sqrt}

# (precedence, right-associative); unary minus sits between ^ and  * /
_BINARY = {"+": (1, False), "-": (1, False), "*": (2, False), "/": (2, False), "^": (4, True)}
_UNARY_PRECEDENCE = 3


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExpressionError(f"unexpected character {text[pos]!r} in expression")
        pos = m.end()
        if m.lastgroup == "number":
            tokens.append(("number", m.group("number")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    return tokens


def _to_rpn(tokens: list[tuple[str, str]]) -> list[tuple[str, str]]:
    output: list[tuple[str, str]] = []
    stack: list[tuple[str, str]] = []
    previous = None  # None / "value" / "op" / "lparen" / "function"
    for kind, text in tokens:
        if kind == "number":
            output.append(("number", text))
            previous = "value"
        elif kind == "name":
            if text == "x":
                output.append(("var", text))
                previous = "value"
            elif text in _FUNCTIONS:
                stack.append(("function", text))
                previous = "function"
            else:
                raise ExpressionError(f"unknown identifier {text!r}")
        elif text == "(":
            stack.append(("lparen", text))
            previous = "lparen"
        elif text == ")":
            while stack and stack[-1][0] != "lparen":
                output.append(stack.pop())
            if not stack:
                raise ExpressionError("unbalanced parentheses")
            stack.pop()
            if stack and stack[-1][0] == "function":
                output.append(stack.pop())
            previous = "value"
        else:
            unary = text in "+-" and previous in (None, "op", "lparen", "function")
            if unary:
                if text == "-":
                    stack.append(("unary", "neg"))
                # unary plus is a no-op
                previous = "op"
                continue
            if text not in _BINARY:
                raise ExpressionError(f"unsupported operator {text!r}")
            prec, right = _BINARY[text]
            while stack:
                top_kind, top_text = stack[-1]
                if top_kind == "lparen":
                    break
                if top_kind == "function":
                    output.append(stack.pop())
                    continue
                top_prec = _UNARY_PRECEDENCE if top_kind == "unary" else _BINARY[top_text][0]
                if top_prec > prec or (top_prec == prec and not right):
                    output.append(stack.pop())
                else:
                    break
            stack.append(("binary", text))
            previous = "op"
    while stack:
        kind, text = stack.pop()
        if kind == "lparen":
            raise ExpressionError("unbalanced parentheses")
        output.append((kind, text))
    return output


def evaluate_expression(text: str, x):
    """Evaluate the expression at x (scalar or ndarray).

    Returns an array matching x when x is an array, even for constant
    expressions, so profile samplers always get per-node values.
    """
    if not isinstance(text, str) or not text.strip():
        raise ExpressionError("empty expression")
    rpn = _to_rpn(_tokenize(text))
    x_arr = np.asarray(x, dtype=float)
    stack = []
    for kind, token in rpn:
        if kind == "number":
            stack.append(float(token))
        elif kind == "var":
            stack.append(x_arr)
        elif kind == "unary":
            if not stack:
                raise ExpressionError("dangling unary minus")
            stack.append(-stack.pop())
        elif kind == "function":
            if not stack:
                raise ExpressionError(f"function {token!r} missing its argument")
            with np.errstate(invalid="ignore"):
                stack.append(_FUNCTIONS[token](stack.pop()))
        else:
            if len(stack) < 2:
                raise ExpressionError(f"operator {token!r} missing operands")
            b = stack.pop()
            a = stack.pop()
            with np.errstate(divide="ignore", invalid="ignore"):
                if token == "+":
                    stack.append(a + b)
                elif token == "-":
                    stack.append(a - b)
                elif token == "*":
                    stack.append(a * b)
                elif token == "/":
                    stack.append(a / b)
                else:
                    stack.append(np.power(a, b))
    if len(stack) != 1:
        raise ExpressionError("malformed expression")
    result = stack[0]
    if x_arr.ndim > 0 and np.ndim(result) == 0:
        return np.full(x_arr.shape, float(result))
    return result
