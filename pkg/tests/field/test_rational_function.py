"""
Test suite for src/field/rational_function.py

Canonical forms, field axioms on random elements, Frobenius and p-th roots, and the
p-basis decomposition over K^(p^r).
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.field.rational_function import (
    function_field,
    frobenius,
    member_subfield,
    normalize,
    pbasis_decompose,
    pth_root,
    reconstruct,
)
from src.utils.errors import (
    HeightBudgetExceeded,
    InvalidPrime,
    InvalidVariables,
    NotAPower,
    VariableBudgetExceeded,
    ZeroDenominator,
)
from src.utils.settings import BudgetSettings

K3 = function_field(3, ("x", "y"))

monomials = st.tuples(st.integers(0, 3), st.integers(0, 3))
polynomials = st.dictionaries(monomials, st.integers(1, 2), max_size=3).map(
    lambda terms: K3.ring.from_dict(terms)
)
nonzero_polynomials = polynomials.filter(bool)
elements = st.builds(lambda n, d: normalize(K3, n, d), polynomials, nonzero_polynomials)
nonzero_elements = elements.filter(lambda f: not f.is_zero)


def test_function_field_rejects_bad_input():
    """Non-primes, duplicate names and oversized inputs are refused."""
    with pytest.raises(InvalidPrime):
        function_field(4, ("x",))
    with pytest.raises(InvalidPrime):
        function_field(11, ("x",))
    with pytest.raises(InvalidVariables):
        function_field(2, ("x", "x"))
    with pytest.raises(InvalidVariables):
        function_field(2, ("1x",))
    with pytest.raises(VariableBudgetExceeded):
        function_field(2, ("a", "b", "c", "d", "e"))


def test_function_field_is_cached():
    assert function_field(3, ("x", "y")) is K3


def test_canonical_form_divides_gcd_and_makes_denominator_monic():
    x, y = K3.variable("x"), K3.variable("y")
    f = (x * x - y * y) / ((x + y) * 2)
    assert f == (x - y) * 2
    assert f.is_polynomial
    g = x / (y * 2)
    assert g.denominator == K3.ring.gens[1]


def test_normalize_with_constant_numerator_or_denominator():
    ring = K3.ring
    x, y = ring.gens
    f = normalize(K3, x * 2 + y, ring.ground_new(2))
    assert f.denominator == ring.one
    assert f.numerator == x + y * 2
    g = normalize(K3, ring.ground_new(2), x * 2 + 1)
    assert g.numerator == ring.one
    assert g.denominator == x + 2


def test_zero_denominator():
    with pytest.raises(ZeroDenominator):
        K3.variable("x") / K3.zero
    with pytest.raises(ZeroDenominator):
        normalize(K3, K3.ring.one, K3.ring.zero)


def test_negative_powers():
    x = K3.variable("x")
    assert x**-2 * x**2 == K3.one


@settings(max_examples=1000)
@given(elements, elements, elements)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert f - f == K3.zero


@given(nonzero_elements)
def test_inverse(f):
    assert f * f.inverse() == K3.one
    assert (f / f).is_one


@given(elements, elements)
def test_frobenius_is_additive_and_multiplicative(f, g):
    assert frobenius(f + g) == frobenius(f) + frobenius(g)
    assert frobenius(f * g) == frobenius(f) * frobenius(g)
    assert frobenius(f) == f**3


@given(elements)
def test_pth_root_inverts_frobenius(f):
    assert pth_root(frobenius(f, 2), 2) == f
    assert member_subfield(frobenius(f), 1)


def test_pth_root_of_a_non_power():
    x = K3.variable("x")
    assert not member_subfield(x, 1)
    with pytest.raises(NotAPower):
        pth_root(x + 1, 1)


@given(elements)
def test_pbasis_decomposition_reconstructs(f):
    coords = pbasis_decompose(f, 1)
    assert reconstruct(coords) == f
    assert all(member_subfield(value, 1) for value in coords.coords.values())
    assert all(max(m) < 3 for m in coords)


def test_pbasis_decomposition_of_a_fraction():
    x, y = K3.variable("x"), K3.variable("y")
    f = x / (y + 1)
    coords = pbasis_decompose(f, 1)
    assert reconstruct(coords) == f
    assert not coords.is_scalar
    assert pbasis_decompose(frobenius(f), 1).is_scalar


def test_pbasis_decomposition_respects_height_budget():
    with pytest.raises(HeightBudgetExceeded):
        pbasis_decompose(K3.one, 3, BudgetSettings(height_budget=2))
    with pytest.raises(HeightBudgetExceeded):
        pbasis_decompose(K3.one, 0)


def test_box_enumerates_exponents_below_p_power():
    box = K3.box(1)
    assert len(box) == 9
    assert box[0] == (0, 0) and box[-1] == (2, 2)
