"""Arithmetic expressions in one variable.

Grammar, loosest binding first::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | 'x' | 'n' | 'pi' | 'e' | NAME '(' expr ')' | '(' expr ')'

Evaluation works on floats and on numpy arrays alike; non-finite results
are values, not errors.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from netlimit.errors import ParseError, UnknownFunction

BUILTINS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "floor": np.floor,
    "sign": np.sign,
}
CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLES = ("x", "n")


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Ast"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Ast"
    right: "Ast"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Ast"


Ast = Union[Number, Var, Unary, Binary, Call]

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(pos, f"a number, name or operator, found {text[pos]!r}")
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def accept(self, *ops: str) -> str | None:
        kind, val, _ = self.tok
        if kind == "op" and val in ops:
            self.i += 1
            return val
        return None

    def expect(self, op: str) -> None:
        if self.accept(op) is None:
            raise ParseError(self.tok[2], repr(op))

    def parse(self) -> Ast:
        node = self.expr()
        if self.tok[0] != "end":
            raise ParseError(self.tok[2], "an operator or end of input")
        return node

    def expr(self) -> Ast:
        node = self.term()
        while (op := self.accept("+", "-")) is not None:
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Ast:
        node = self.unary()
        while (op := self.accept("*", "/")) is not None:
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Ast:
        if self.accept("-") is not None:
            return Unary("-", self.unary())
        return self.power()

    def power(self) -> Ast:
        base = self.atom()
        if self.accept("^") is not None:
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Ast:
        kind, val, pos = self.tok
        if kind == "num":
            self.i += 1
            return Number(float(val))
        if kind == "name":
            self.i += 1
            if val in VARIABLES:
                return Var(val)
            if val in CONSTANTS:
                return Number(CONSTANTS[val])
            if val in BUILTINS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            raise ParseError(pos, f"a variable, constant or builtin function, found {val!r}")
        if self.accept("(") is not None:
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(pos, "a number, variable, function call or '('")


def parse(text: str) -> Ast:
    return _Parser(text).parse()


def to_text(node: Ast) -> str:
    """Fully parenthesised rendering; ``parse(to_text(t)) == t``."""
    if isinstance(node, Number):
        s = repr(node.value)
        return f"({s})" if node.value < 0 or "inf" in s or "nan" in s else s
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        return f"(-{to_text(node.child)})"
    if isinstance(node, Binary):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({to_text(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def _eval(node: Ast, x):
    if isinstance(node, Number):
        return np.float64(node.value)
    if isinstance(node, Var):
        return x
    if isinstance(node, Unary):
        return -_eval(node.child, x)
    if isinstance(node, Binary):
        a, b = _eval(node.left, x), _eval(node.right, x)
        op = node.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return np.divide(a, b)
        return np.power(a, b)
    if isinstance(node, Call):
        try:
            fn = BUILTINS[node.name]
        except KeyError:
            raise UnknownFunction(node.name) from None
        return fn(_eval(node.arg, x))
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node: Ast, x):
    """Value of ``node`` at ``x`` (a float or an array of floats)."""
    scalar = np.ndim(x) == 0
    xv = np.float64(x) if scalar else np.asarray(x, dtype=np.float64)
    with np.errstate(all="ignore"):
        out = _eval(node, xv)
    return float(out) if scalar else np.broadcast_to(np.asarray(out, dtype=np.float64), xv.shape).copy()


def compile_expr(text: str):
    """Parse ``text`` and return a callable ``f(x)`` suitable for a net."""
    tree = parse(text)

    def f(x):
        return evaluate(tree, x)

    f.__name__ = text
    f.ast = tree
    return f
