"""
Text grammar for polynomials and rational functions.

    rational   := term { ("+" | "-") term }
    term       := factor { ("*" | "/") factor }
    factor     := ("+" | "-") factor | atom [ "^" NUMBER ]
    atom       := NUMBER | NAME | "(" rational ")"

Division binds like multiplication and associates to the left, so "1/x + 1" is
(1/x) + 1 and "x / y * y" is x. Polynomials use the same grammar without "/".
Numbers are reduced mod p. Errors carry the line and column of the offending token.

The canonical printer lists terms in descending lex order with coefficients in
1..p-1, e.g. "x^2*y + 2*x + 1"; a rational function with nontrivial denominator is
printed "(num) / (den)". Parsing the printed text gives back the same element.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from sympy.polys.rings import PolyElement, PolyRing

from src.field.rational_function import FunctionField, RationalFunction
from src.utils.errors import ParseError

TOKEN_PATTERN = re.compile(
    r"(?P<space>\s+)|(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^/()\[\],])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def location(text: str, offset: int) -> tuple[int, int]:
    """1-based line and column of a character offset."""
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    offset = 0
    while offset < len(text):
        match = TOKEN_PATTERN.match(text, offset)
        if match is None:
            line, column = location(text, offset)
            raise ParseError(f"unexpected character {text[offset]!r}", line, column)
        kind = match.lastgroup or ""
        if kind != "space":
            tokens.append(Token(kind, match.group(), offset))
        offset = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class TokenStream:
    """Cursor over a token list with error reporting at token positions."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.position = 0

    def peek(self, ahead: int = 0) -> Token:
        index = min(self.position + ahead, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self) -> Token:
        token = self.peek()
        if token.kind != "end":
            self.position += 1
        return token

    def accept(self, text: str) -> bool:
        if self.peek().kind == "op" and self.peek().text == text:
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token.kind != "op" or token.text != text:
            self.fail(f"expected {text!r}", token)
        return self.advance()

    def expect_number(self) -> int:
        token = self.peek()
        if token.kind != "number":
            self.fail("expected a number", token)
        return int(self.advance().text)

    def expect_end(self) -> None:
        token = self.peek()
        if token.kind != "end":
            self.fail(f"unexpected {token.text!r}", token)

    def fail(self, message: str, token: Optional[Token] = None) -> None:
        token = token or self.peek()
        line, column = location(self.text, token.offset)
        raise ParseError(message, line, column)


class PolynomialParser:
    """Recursive descent parser producing elements of a sympy PolyRing."""

    def __init__(self, ring: PolyRing, stream: TokenStream) -> None:
        self.ring = ring
        self.stream = stream
        self.names = {str(symbol): gen for symbol, gen in zip(ring.symbols, ring.gens)}

    def expression(self) -> PolyElement:
        value = self.term()
        while True:
            if self.stream.accept("+"):
                value = value + self.term()
            elif self.stream.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> PolyElement:
        value = self.factor()
        while self.stream.accept("*"):
            value = value * self.factor()
        if self.stream.peek().text == "/":
            self.stream.fail("division is not allowed in a polynomial")
        return value

    def factor(self) -> PolyElement:
        if self.stream.accept("-"):
            return -self.factor()
        if self.stream.accept("+"):
            return self.factor()
        base = self.atom()
        if self.stream.accept("^"):
            base = base ** self.stream.expect_number()
        return base

    def atom(self) -> PolyElement:
        token = self.stream.peek()
        if token.kind == "number":
            self.stream.advance()
            return self.ring.ground_new(int(token.text) % self.ring.domain.mod)
        if token.kind == "name":
            if token.text not in self.names:
                self.stream.fail(f"unknown variable {token.text!r}", token)
            self.stream.advance()
            return self.names[token.text]
        if self.stream.accept("("):
            value = self.expression()
            self.stream.expect(")")
            return value
        if token.kind == "end":
            self.stream.fail("unexpected end of input", token)
        self.stream.fail(f"unexpected {token.text!r}", token)
        raise AssertionError("unreachable")


class RationalParser:
    """Recursive descent parser producing rational functions; "/" is a term operator."""

    def __init__(self, field: FunctionField, stream: TokenStream) -> None:
        self.field = field
        self.stream = stream
        self.polynomials = PolynomialParser(field.ring, stream)

    def expression(self) -> RationalFunction:
        value = self.term()
        while True:
            if self.stream.accept("+"):
                value = value + self.term()
            elif self.stream.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> RationalFunction:
        value = self.factor()
        while True:
            if self.stream.accept("*"):
                value = value * self.factor()
            elif self.stream.accept("/"):
                token = self.stream.peek()
                divisor = self.factor()
                if divisor.is_zero:
                    self.stream.fail("division by zero", token)
                value = value / divisor
            else:
                return value

    def factor(self) -> RationalFunction:
        if self.stream.accept("-"):
            return -self.factor()
        if self.stream.accept("+"):
            return self.factor()
        base = self.atom()
        if self.stream.accept("^"):
            base = base ** self.stream.expect_number()
        return base

    def atom(self) -> RationalFunction:
        if self.stream.accept("("):
            value = self.expression()
            self.stream.expect(")")
            return value
        return self.field.from_polynomial(self.polynomials.atom())


def parse_polynomial(text: str, ring: PolyRing) -> PolyElement:
    """
    Parse a polynomial over the given ring.

    Raises:
        ParseError: On grammar errors, unknown names or any division.
    """
    stream = TokenStream(text)
    value = PolynomialParser(ring, stream).expression()
    stream.expect_end()
    return value


def parse_rational(text: str, field: FunctionField) -> RationalFunction:
    """
    Parse a rational function in the given field.

    Raises:
        ParseError: On grammar errors, unknown variables or division by zero.
    """
    stream = TokenStream(text)
    value = RationalParser(field, stream).expression()
    stream.expect_end()
    return value


# ============================================================================
# Canonical printing
# ============================================================================


def format_monomial(exponents: tuple[int, ...], names: tuple[str, ...]) -> str:
    parts = []
    for name, e in zip(names, exponents):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(polynomial: PolyElement) -> str:
    """Canonical text of a polynomial over GF(p)."""
    if not polynomial:
        return "0"
    ring = polynomial.ring
    p = ring.domain.mod
    names = tuple(str(symbol) for symbol in ring.symbols)
    pieces = []
    for monom, coeff in polynomial.terms():
        c = int(coeff) % p
        monomial = format_monomial(monom, names)
        if not monomial:
            pieces.append(str(c))
        elif c == 1:
            pieces.append(monomial)
        else:
            pieces.append(f"{c}*{monomial}")
    return " + ".join(pieces)


def format_rational(f: RationalFunction) -> str:
    """Canonical text of a rational function."""
    if f.is_polynomial:
        return format_polynomial(f.numerator)
    return f"({format_polynomial(f.numerator)}) / ({format_polynomial(f.denominator)})"
