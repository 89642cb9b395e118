"""Parsing of arithmetic expression strings into polynomials, and the inverse.

Grammar (whitespace insensitive, no implicit multiplication):

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | factor
    factor  := primary (('^' | '**') uint)?
    primary := number | identifier | '(' expr ')'

``^`` and ``**`` both denote exponentiation and bind tighter than ``*``;
unary minus binds looser than exponentiation, so ``-x^2`` means ``-(x^2)``
and ``(-x)^2`` needs the parentheses.  Numbers are plain integer or decimal
literals (no scientific notation); exponents must be non-negative integers.
"""

from __future__ import annotations

import re
from decimal import Decimal
from itertools import groupby
from typing import NamedTuple

from .errors import ParseError
from .polynomial import Polynomial

_TOKEN_RE = re.compile(
    r"(?P<number>\d+(?:\.\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|[+\-*^()])"
)


class _Token(NamedTuple):
    kind: str  # number | ident | op | end
    text: str
    position: int  # 1-based character offset


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unknown token {text[pos]!r}", pos + 1)
        kind = match.lastgroup
        tok = match.group()
        tokens.append(_Token(kind, "^" if tok == "**" else tok, pos + 1))
        pos = match.end()
    tokens.append(_Token("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expr(self) -> Polynomial:
        result = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Polynomial:
        result = self.unary()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.advance()
            result = result * self.unary()
        return result

    def unary(self) -> Polynomial:
        if self.peek().kind == "op" and self.peek().text == "-":
            self.advance()
            return -self.unary()
        return self.factor()

    def factor(self) -> Polynomial:
        base = self.primary()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            exponent = self.peek()
            if exponent.kind != "number" or "." in exponent.text:
                raise ParseError(
                    "exponent must be a non-negative integer literal", exponent.position
                )
            self.advance()
            return base ** int(exponent.text)
        return base

    def primary(self) -> Polynomial:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Polynomial({(): float(tok.text)})
        if tok.kind == "ident":
            self.advance()
            return Polynomial({(tok.text,): 1.0})
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            inner = self.expr()
            closing = self.peek()
            if closing.kind != "op" or closing.text != ")":
                raise ParseError("expected ')'", closing.position)
            self.advance()
            return inner
        raise ParseError(f"unexpected token {tok.text!r}" if tok.kind != "end" else "unexpected end of expression", tok.position)


def parse_expression(text: str) -> Polynomial:
    """Parse an expression string into a fully expanded :class:`Polynomial`."""
    tokens = _tokenize(text)
    if tokens[0].kind == "end":
        raise ParseError("empty expression", 1)
    parser = _Parser(tokens)
    result = parser.expr()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ParseError(f"unexpected token {trailing.text!r}", trailing.position)
    return result


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    text = repr(value)
    if "e" in text or "E" in text:
        # The parser has no scientific notation; expand positionally.
        text = format(Decimal(text), "f")
    return text


def _format_monomial(mono: tuple[str, ...]) -> str:
    parts = []
    for name, run in groupby(mono):
        count = len(list(run))
        parts.append(name if count == 1 else f"{name}^{count}")
    return "*".join(parts)


def format_polynomial(poly: Polynomial) -> str:
    """Render a polynomial deterministically; parses back to an equal value.

    Terms are ordered by descending degree, then lexicographically by
    monomial.  The zero polynomial renders as ``"0"``.
    """
    if not poly:
        return "0"
    pieces = []
    ordered = sorted(poly.terms.items(), key=lambda kv: (-len(kv[0]), kv[0]))
    for i, (mono, coeff) in enumerate(ordered):
        magnitude = abs(coeff)
        if not mono:
            body = _format_number(magnitude)
        elif magnitude == 1.0:
            body = _format_monomial(mono)
        else:
            body = f"{_format_number(magnitude)}*{_format_monomial(mono)}"
        if i == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return " ".join(pieces)
