"""
Test suite for src/diffop/parser.py
"""

import pytest

from src.diffop.operator import DiffOp
from src.diffop.parser import format_operator, parse_operator
from src.field.rational_function import function_field
from src.utils.errors import ParseError

K = function_field(2, ("t",))
KXY = function_field(3, ("x", "y"))


def test_parse_canonical_text():
    t = K.variable("t")
    op = parse_operator("1 * d[t]^[2] + (t^2) * d[t]^[1]", K)
    assert op == DiffOp.partial(K, "t", 2) + DiffOp.partial(K, "t").scale(t**2)


def test_format_is_canonical():
    t = K.variable("t")
    op = DiffOp.partial(K, "t").scale(t**2) + DiffOp.partial(K, "t", 2)
    text = format_operator(op)
    assert text == "1 * d[t]^[2] + (t^2) * d[t]^[1]"
    assert format_operator(parse_operator(text, K)) == text
    assert format_operator(DiffOp.zero(K)) == "0"


def test_products_of_divided_powers_use_binomials():
    # d^[1] * d^[1] = C(2, 1) d^[2] = 2 d^[2]
    op = parse_operator("d[x]^[1] * d[x]^[1]", KXY)
    assert op == DiffOp.partial(KXY, "x", 2).scale(2)


def test_mixed_orders_and_fractions():
    op = parse_operator("(x / (y + 1)) * d[x]^[1] * d[y]^[2] - d[y]^[1]", KXY)
    assert format_operator(parse_operator(format_operator(op), KXY)) == format_operator(op)
    assert len(op.terms) == 2


@pytest.mark.parametrize("text", ["x", "d[z]^[1]", "d[x]^1", "d[x]^[1] +"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_operator(text, KXY)


def test_coefficient_division_binds_like_multiplication():
    t = K.variable("t")
    op = parse_operator("(1/t + 1) * d[t]^[1]", K)
    assert op == DiffOp.partial(K, "t").scale((t + 1) / t)
    assert parse_operator("(t / t * t) * d[t]^[2]", K) == DiffOp.partial(K, "t", 2).scale(t)
