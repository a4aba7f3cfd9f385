"""Tiny recursive-descent parser for potential expressions on [0, 1].

Grammar: numbers, the variable x, + - * /, parentheses and the functions
sin, cos, exp.  Compiles to a plain float -> float callable.
"""

from __future__ import annotations

import math
import re
from typing import Callable


class PotentialParseError(ValueError):
    """The potential expression is not valid under the supported grammar."""


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[()+\-*/]))"
)

_FUNCTIONS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
}

Expr = Callable[[float], float]


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PotentialParseError(f"unexpected character {text[pos]!r} at {pos}")
        tokens.append(m.group(m.lastgroup))
        pos = m.end()
    tokens.append("<eof>")
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str:
        return self.tokens[self.pos]

    def take(self) -> str:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.take() != tok:
            raise PotentialParseError(f"expected {tok!r} near token {self.pos}")

    def expression(self) -> Expr:
        node = self.term()
        while self.peek() in "+-":
            op = self.take()
            rhs = self.term()
            lhs = node
            if op == "+":
                node = lambda x, a=lhs, b=rhs: a(x) + b(x)
            else:
                node = lambda x, a=lhs, b=rhs: a(x) - b(x)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek() in "*/":
            op = self.take()
            rhs = self.unary()
            lhs = node
            if op == "*":
                node = lambda x, a=lhs, b=rhs: a(x) * b(x)
            else:
                node = lambda x, a=lhs, b=rhs: a(x) / b(x)
        return node

    def unary(self) -> Expr:
        if self.peek() == "-":
            self.take()
            inner = self.unary()
            return lambda x, a=inner: -a(x)
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.primary()

    def primary(self) -> Expr:
        tok = self.take()
        if tok == "(":
            node = self.expression()
            self.expect(")")
            return node
        if tok == "x":
            return lambda x: x
        if tok in _FUNCTIONS:
            fn = _FUNCTIONS[tok]
            self.expect("(")
            inner = self.expression()
            self.expect(")")
            return lambda x, a=inner, f=fn: f(a(x))
        try:
            value = float(tok)
        except ValueError:
            raise PotentialParseError(f"unknown name or token {tok!r}") from None
        return lambda x, v=value: v


def parse_potential(text: str) -> Expr:
    """Compile a potential expression like "x*(1-x)" or "4" to a callable."""
    if not text.strip():
        raise PotentialParseError("empty potential expression")
    parser = _Parser(_tokenize(text))
    node = parser.expression()
    if parser.peek() != "<eof>":
        raise PotentialParseError(f"trailing input from token {parser.pos}")
    return node
