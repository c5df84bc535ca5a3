"""Recursive-descent parser for polynomial text.

Grammar::

    expr     := [sign] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' exponent)*
    exponent := ['-'] int | '(' ['-'] int ')'
    atom     := rational | 'zeta' | ident | '(' expr ')'
    rational := int ('/' posint)?

``zeta`` is the primitive N-th root of unity of the ring's field.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import MathError, ParseError
from .laurent import LaurentPoly, PolyRing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, ident, sym = m.groups()
        if num is not None:
            tokens.append(("int", num))
        elif ident is not None:
            tokens.append(("ident", ident))
        else:
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r}")
            tokens.append((sym, sym))
        pos = m.end()
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ring = ring

    def peek(self) -> str:
        return self.tokens[self.pos][0]

    def take(self, kind: str | None = None) -> str:
        k, v = self.tokens[self.pos]
        if kind is not None and k != kind:
            shown = v or "end of input"
            raise ParseError(f"expected {kind!r} but found {shown!r}")
        self.pos += 1
        return v

    def parse(self) -> LaurentPoly:
        if self.peek() == "end":
            raise ParseError("empty expression")
        result = self.expr()
        if self.peek() != "end":
            raise ParseError(f"unexpected token {self.tokens[self.pos][1]!r}")
        return result

    def expr(self) -> LaurentPoly:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.take() == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> LaurentPoly:
        acc = self.factor()
        while self.peek() == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> LaurentPoly:
        base = self.atom()
        while self.peek() == "^":
            self.take()
            k = self.exponent()
            if k < 0:
                try:
                    base = base.inverse_monomial() ** (-k)
                except MathError:
                    raise ParseError("negative exponent on a non-Laurent expression") from None
            else:
                base = base ** k
        return base

    def exponent(self) -> int:
        paren = self.peek() == "("
        if paren:
            self.take()
        neg = False
        if self.peek() == "-":
            self.take()
            neg = True
        k = int(self.take("int"))
        if paren:
            self.take(")")
        return -k if neg else k

    def atom(self) -> LaurentPoly:
        kind = self.peek()
        if kind == "int":
            num = int(self.take())
            if self.peek() == "/":
                self.take()
                den = int(self.take("int"))
                if den == 0:
                    raise ParseError("zero denominator")
                return self.ring.const(Fraction(num, den))
            return self.ring.const(num)
        if kind == "ident":
            name = self.take()
            if name == "zeta":
                return self.ring.const(self.ring.ctx.zeta)
            if name not in self.ring.index:
                raise ParseError(f"unknown variable {name!r}")
            return self.ring.var(name)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        shown = self.tokens[self.pos][1] or "end of input"
        raise ParseError(f"unexpected {shown!r}")


def parse_poly(text: str, ring: PolyRing) -> LaurentPoly:
    """Parse ``text`` into ``ring``; raises ParseError on malformed input."""
    if not isinstance(text, str):
        raise ParseError("expression must be a string")
    return _Parser(text, ring).parse()


def parse_scalar(text: str, ring_or_ctx):
    """Parse a constant expression such as ``-zeta^2`` or ``1/3``."""
    from .cyclotomic import FieldContext

    ring = ring_or_ctx
    if isinstance(ring_or_ctx, FieldContext):
        ring = PolyRing(ring_or_ctx, ())
    f = parse_poly(str(text), ring)
    if not f.is_constant():
        raise ParseError(f"expected a scalar, got {text!r}")
    return f.constant_value()
