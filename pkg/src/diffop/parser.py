"""
Text format of divided-power operators.

    operator := term { ("+" | "-") term }
    term     := ["-"] factor { "*" factor }
    factor   := "d" "[" NAME "]" "^" "[" NUMBER "]"
              | ("+" | "-") factor | "(" rational ")" [ "^" NUMBER ]
              | NUMBER | NAME [ "^" NUMBER ]

Example: "1 * d[t]^[2] + (t^2) * d[t]^[1]". A term must contain at least one
divided power unless its coefficient is zero. The printer is canonical: terms in
descending order of order vectors, constant coefficients bare, other coefficients in
parentheses, so format_operator(parse_operator(format_operator(D))) == format_operator(D).
"""

from __future__ import annotations

from src.diffop.binomial import lucas_binomial
from src.diffop.operator import DiffOp, Orders
from src.field.parser import RationalParser, TokenStream, format_rational
from src.field.rational_function import FunctionField, RationalFunction
from src.utils.constants import DIVIDED_POWER_SYMBOL, FACTOR_SEPARATOR, TERM_SEPARATOR


class OperatorParser:
    def __init__(self, field: FunctionField, text: str) -> None:
        self.field = field
        self.stream = TokenStream(text)
        self.rationals = RationalParser(field, self.stream)

    def parse(self) -> DiffOp:
        total = self.term()
        while True:
            if self.stream.accept("+"):
                total = total + self.term()
            elif self.stream.accept("-"):
                total = total - self.term()
            else:
                break
        self.stream.expect_end()
        return total

    def _at_divided_power(self) -> bool:
        token, following = self.stream.peek(), self.stream.peek(1)
        return (
            token.kind == "name"
            and token.text == DIVIDED_POWER_SYMBOL
            and following.text == "["
        )

    def term(self) -> DiffOp:
        start = self.stream.peek()
        negate = self.stream.accept("-")
        coefficient = self.field.one
        orders = [0] * self.field.n
        multiplicity = 1
        seen_power = False
        while True:
            if self._at_divided_power():
                variable, order = self.divided_power()
                index = self.field.index(variable)
                multiplicity *= lucas_binomial(orders[index] + order, order, self.field.p)
                orders[index] += order
                seen_power = True
            else:
                coefficient = coefficient * self.coefficient_factor()
            if not self.stream.accept("*"):
                break
        coefficient = coefficient * multiplicity
        if negate:
            coefficient = -coefficient
        if not seen_power:
            if coefficient.is_zero:
                return DiffOp.zero(self.field)
            self.stream.fail("term without a divided power", start)
        return DiffOp.from_terms(self.field, {tuple(orders): coefficient})

    def divided_power(self) -> tuple[str, int]:
        self.stream.advance()
        self.stream.expect("[")
        token = self.stream.peek()
        if token.kind != "name" or token.text not in self.field.variables:
            self.stream.fail(f"unknown variable {token.text!r}", token)
        self.stream.advance()
        self.stream.expect("]")
        self.stream.expect("^")
        self.stream.expect("[")
        order = self.stream.expect_number()
        self.stream.expect("]")
        return token.text, order

    def coefficient_factor(self) -> RationalFunction:
        return self.rationals.factor()


def parse_operator(text: str, field: FunctionField) -> DiffOp:
    """
    Parse an operator in the canonical text format.

    Raises:
        ParseError: On grammar errors, unknown variables or a term without a
                    divided power.
    """
    return OperatorParser(field, text).parse()


def format_divided_powers(orders: Orders, variables: tuple[str, ...]) -> str:
    return FACTOR_SEPARATOR.join(
        f"{DIVIDED_POWER_SYMBOL}[{name}]^[{order}]"
        for name, order in zip(variables, orders)
        if order
    )


def format_coefficient(coefficient: RationalFunction) -> str:
    text = format_rational(coefficient)
    if coefficient.is_polynomial and coefficient.numerator.is_ground:
        return text
    return f"({text})"


def format_operator(op: DiffOp) -> str:
    """Canonical text of an operator; "0" for the zero operator."""
    if op.is_zero:
        return "0"
    pieces = [
        f"{format_coefficient(op.terms[orders])}{FACTOR_SEPARATOR}"
        f"{format_divided_powers(orders, op.field.variables)}"
        for orders in sorted(op.terms, reverse=True)
    ]
    return TERM_SEPARATOR.join(pieces)
