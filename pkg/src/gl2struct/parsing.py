"""Parser for the canonical scalar/polynomial text grammar.

Accepts what the renderers emit (``1/76``, ``(3/4)+i(1/2)``,
``p0^2*p1 - (1/2)*p2``) plus ordinary infix input.  ``i`` is the imaginary
unit; any other identifier is a variable.  Juxtaposition before ``(`` or an
identifier means multiplication, so ``i(1/2)`` and ``2p0`` parse.
"""

from __future__ import annotations

import re
from typing import List, Optional, Sequence, Tuple

from .poly import MultiPoly, RatFunc
from .scalars import GaussRational

__all__ = ["ParseError", "parse_ratfunc", "parse_poly", "parse_scalar"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, ident, sym = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("num", num, start))
        elif ident is not None:
            tokens.append(("id", ident, start))
        else:
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r}", text, start)
            tokens.append(("op", sym, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Optional[Sequence[str]]):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0
        self.variables = tuple(variables) if variables is not None else None

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        t = self.tokens[self.k]
        self.k += 1
        return t

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            raise ParseError(f"expected {value!r}", self.text, t[2])

    def parse(self) -> RatFunc:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", self.text, 0)
        r = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", self.text, t[2])
        return r

    def expr(self) -> RatFunc:
        r = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            r = r + rhs if op == "+" else r - rhs
        return r

    def _starts_atom(self, t) -> bool:
        return t[0] in ("num", "id") or (t[0] == "op" and t[1] == "(")

    def term(self) -> RatFunc:
        r = self.unary()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in ("*", "/"):
                self.take()
                rhs = self.unary()
                if t[1] == "*":
                    r = r * rhs
                else:
                    if rhs.is_zero():
                        raise ParseError("division by zero", self.text, t[2])
                    r = r / rhs
            elif self._starts_atom(t):
                r = r * self.power()
            else:
                return r

    def unary(self) -> RatFunc:
        t = self.peek()
        if t[0] == "op" and t[1] in ("+", "-"):
            self.take()
            r = self.unary()
            return -r if t[1] == "-" else r
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            t = self.take()
            if t[0] != "num":
                raise ParseError("integer exponent expected", self.text, t[2])
            e = sign * int(t[1])
            if e < 0 and base.is_zero():
                raise ParseError("division by zero", self.text, t[2])
            return base ** e
        return base

    def atom(self) -> RatFunc:
        t = self.take()
        if t[0] == "num":
            return RatFunc(int(t[1]))
        if t[0] == "id":
            if t[1] == "i":
                return RatFunc(GaussRational(0, 1))
            if self.variables is not None and t[1] not in self.variables:
                raise ParseError(f"unknown variable {t[1]!r}", self.text, t[2])
            return RatFunc(MultiPoly.var(t[1], self.variables or (t[1],)))
        if t[1] == "(":
            r = self.expr()
            self.expect(")")
            return r
        raise ParseError(f"unexpected {t[1] or 'end of input'!r}", self.text, t[2])


def _embed(r: RatFunc, variables) -> RatFunc:
    if variables is None:
        return r
    return RatFunc(r.num.embed(variables), r.den.embed(variables), _reduced=True)


def parse_ratfunc(text: str, variables: Optional[Sequence[str]] = None) -> RatFunc:
    """Parse into a ``RatFunc``; with ``variables`` given, unknown names are rejected."""
    return _embed(_Parser(text, variables).parse(), variables)


def parse_poly(text: str, variables: Optional[Sequence[str]] = None) -> MultiPoly:
    r = parse_ratfunc(text, variables)
    if not r.is_polynomial():
        raise ValueError(f"{text!r} is not a polynomial")
    return r.num / r.den.constant_value()


def parse_scalar(text: str) -> GaussRational:
    r = _Parser(text, ()).parse()
    return r.constant_value()
