"""
Exact arithmetic in the rational function field K = F_p(x_1, ..., x_n).

Elements are kept in a canonical form: numerator and denominator are coprime
polynomials over GF(p) and the denominator is monic with respect to the lex order
of the variables. Polynomials are sympy sparse ring elements (sympy.polys.rings), so
gcd, exact division and monic normalization come from sympy.

The module also provides the Frobenius power map, p^r-th roots and the decomposition
of an element in the p-basis {x^m : 0 <= m_i < p^r} of K over the subfield K^(p^r).

Usage:
    from src.field.rational_function import function_field, pbasis_decompose

    K = function_field(2, ("x", "y"))
    f = K.variable("x") / (K.variable("y") + 1)
    coords = pbasis_decompose(f, 1)
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Mapping, Optional, Union

from sympy import isprime
from sympy.polys.domains import GF
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from src.utils.constants import VERIFY_RANDOM_DEGREE, VERIFY_RANDOM_TERMS
from src.utils.errors import (
    HeightBudgetExceeded,
    InvalidPrime,
    InvalidVariables,
    NotAPower,
    VariableBudgetExceeded,
    ZeroDenominator,
)
from src.utils.settings import BudgetSettings, resolve

Exponent = tuple[int, ...]
Scalar = Union[int, "RationalFunction"]


@dataclass(frozen=True)
class FunctionField:
    """
    The field F_p(x_1, ..., x_n) with a fixed variable order.

    Two fields are equal when they have the same prime and the same ordered variables.
    Use function_field() to build instances with budget validation.
    """

    p: int
    variables: tuple[str, ...]
    ring: PolyRing = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isprime(self.p):
            raise InvalidPrime(f"{self.p} is not a prime")
        if not self.variables:
            raise InvalidVariables("at least one variable is required")
        if len(set(self.variables)) != len(self.variables):
            raise InvalidVariables(f"duplicate variables in {self.variables}")
        for name in self.variables:
            if not name.isidentifier():
                raise InvalidVariables(f"{name!r} is not an identifier")
        object.__setattr__(self, "ring", PolyRing(list(self.variables), GF(self.p), lex))

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def zero(self) -> RationalFunction:
        return RationalFunction(self, self.ring.zero, self.ring.one)

    @property
    def one(self) -> RationalFunction:
        return RationalFunction(self, self.ring.one, self.ring.one)

    def constant(self, value: int) -> RationalFunction:
        return self.from_polynomial(self.ring.ground_new(value % self.p))

    def variable(self, name: str) -> RationalFunction:
        return self.from_polynomial(self.ring.gens[self.index(name)])

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError as e:
            raise InvalidVariables(f"unknown variable {name!r}") from e

    def monomial(self, exponents: Exponent, coefficient: int = 1) -> RationalFunction:
        """Return coefficient * x^exponents."""
        return self.from_polynomial(self.monomial_polynomial(exponents, coefficient))

    def monomial_polynomial(self, exponents: Exponent, coefficient: int = 1) -> PolyElement:
        if len(exponents) != self.n:
            raise InvalidVariables(
                f"exponent vector {exponents} does not match {self.n} variables"
            )
        return self.ring.from_dict({tuple(exponents): coefficient % self.p})

    def from_polynomial(self, polynomial: PolyElement) -> RationalFunction:
        """Wrap a polynomial of self.ring as a field element (already canonical)."""
        return RationalFunction(self, polynomial, self.ring.one)

    def element(self, numerator: PolyElement, denominator: PolyElement) -> RationalFunction:
        return normalize(self, numerator, denominator)

    def coerce(self, value: Scalar) -> RationalFunction:
        if isinstance(value, RationalFunction):
            if value.field != self:
                raise InvalidVariables("operands belong to different fields")
            return value
        return self.constant(int(value))

    def box(self, level: int) -> list[Exponent]:
        """Exponent vectors m with 0 <= m_i < p^level, in lex order."""
        q = self.p**level
        return [tuple(m) for m in product(range(q), repeat=self.n)]


@lru_cache(maxsize=None)
def _cached_field(p: int, variables: tuple[str, ...]) -> FunctionField:
    return FunctionField(p, variables)


def function_field(
    p: int, variables: tuple[str, ...] | list[str], budget: Optional[BudgetSettings] = None
) -> FunctionField:
    """
    Build F_p(variables) after checking the prime and variable budgets.

    Args:
        p: The characteristic, a prime not exceeding the configured maximum.
        variables: Ordered variable names.
        budget: Optional budget; the process-wide settings are used when omitted.

    Raises:
        InvalidPrime: If p is not prime or exceeds the budget.
        InvalidVariables: If the names are empty, duplicated or not identifiers.
        VariableBudgetExceeded: If there are more variables than allowed.
    """
    settings = resolve(budget)
    if p > settings.max_prime:
        raise InvalidPrime(f"prime {p} exceeds the configured maximum {settings.max_prime}")
    names = tuple(variables)
    if len(names) > settings.max_variables:
        raise VariableBudgetExceeded(
            f"{len(names)} variables exceed the configured maximum {settings.max_variables}"
        )
    return _cached_field(p, names)


@dataclass(frozen=True)
class RationalFunction:
    """
    An element numerator/denominator of a FunctionField in canonical form.

    Instances built through normalize() (or the arithmetic operators) satisfy
    gcd(numerator, denominator) = 1 and denominator monic; zero is 0/1. Structural
    equality is therefore mathematical equality.
    """

    field: FunctionField
    numerator: PolyElement
    denominator: PolyElement

    @property
    def is_zero(self) -> bool:
        return not self.numerator

    @property
    def is_one(self) -> bool:
        return self.numerator == self.field.ring.one and self.denominator == self.field.ring.one

    @property
    def is_polynomial(self) -> bool:
        return self.denominator == self.field.ring.one

    def __add__(self, other: Scalar) -> RationalFunction:
        other = self.field.coerce(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self.denominator == other.denominator:
            return normalize(self.field, self.numerator + other.numerator, self.denominator)
        return normalize(
            self.field,
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(self.field, -self.numerator, self.denominator)

    def __sub__(self, other: Scalar) -> RationalFunction:
        return self + (-self.field.coerce(other))

    def __rsub__(self, other: Scalar) -> RationalFunction:
        return self.field.coerce(other) - self

    def __mul__(self, other: Scalar) -> RationalFunction:
        other = self.field.coerce(other)
        if self.is_zero or other.is_zero:
            return self.field.zero
        if self.is_polynomial and other.is_polynomial:
            return self.field.from_polynomial(self.numerator * other.numerator)
        return normalize(
            self.field,
            self.numerator * other.numerator,
            self.denominator * other.denominator,
        )

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero:
            raise ZeroDenominator("inverse of zero")
        return normalize(self.field, self.denominator, self.numerator)

    def __truediv__(self, other: Scalar) -> RationalFunction:
        return self * self.field.coerce(other).inverse()

    def __rtruediv__(self, other: Scalar) -> RationalFunction:
        return self.field.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> RationalFunction:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 0:
            return self.field.one
        return RationalFunction(
            self.field, self.numerator**exponent, self.denominator**exponent
        )

    def __repr__(self) -> str:
        from src.field.parser import format_rational

        return f"RationalFunction({format_rational(self)!r})"


def normalize(
    field_: FunctionField, numerator: PolyElement, denominator: PolyElement
) -> RationalFunction:
    """
    Bring numerator/denominator to canonical form.

    Divides out the gcd and makes the denominator monic; zero becomes 0/1.

    Raises:
        ZeroDenominator: If the denominator is zero.
    """
    ring = field_.ring
    if not denominator:
        raise ZeroDenominator("denominator is zero")
    if not numerator:
        return RationalFunction(field_, ring.zero, ring.one)
    if denominator.is_ground:
        return RationalFunction(field_, numerator.quo_ground(denominator.LC), ring.one)
    if not numerator.is_ground:
        _, numerator, denominator = numerator.cofactors(denominator)
    lc = denominator.LC
    if lc != ring.domain.one:
        numerator = numerator.quo_ground(lc)
        denominator = denominator.monic()
    return RationalFunction(field_, numerator, denominator)


# ============================================================================
# Frobenius, roots and p-bases
# ============================================================================


def frobenius_polynomial(polynomial: PolyElement, q: int) -> PolyElement:
    """Return polynomial^q for q a power of p (coefficients lie in F_p)."""
    ring = polynomial.ring
    return ring.from_dict(
        {tuple(q * e for e in monom): coeff for monom, coeff in polynomial.items()}
    )


def frobenius(f: RationalFunction, r: int = 1) -> RationalFunction:
    """Return f^(p^r); the result is canonical without renormalization."""
    if r == 0:
        return f
    q = f.field.p**r
    return RationalFunction(
        f.field, frobenius_polynomial(f.numerator, q), frobenius_polynomial(f.denominator, q)
    )


def _root_polynomial(polynomial: PolyElement, q: int) -> Optional[PolyElement]:
    terms = {}
    for monom, coeff in polynomial.items():
        if any(e % q for e in monom):
            return None
        terms[tuple(e // q for e in monom)] = coeff
    return polynomial.ring.from_dict(terms)


def pth_root(f: RationalFunction, r: int = 1) -> RationalFunction:
    """
    Return the unique g with g^(p^r) = f.

    Raises:
        NotAPower: If f is not a p^r-th power in K.
    """
    if r == 0:
        return f
    q = f.field.p**r
    numerator = _root_polynomial(f.numerator, q)
    denominator = _root_polynomial(f.denominator, q)
    if numerator is None or denominator is None:
        raise NotAPower(f"{f!r} is not a {q}-th power")
    return RationalFunction(f.field, numerator, denominator)


def member_subfield(f: RationalFunction, r: int) -> bool:
    """True iff f lies in K^(p^r)."""
    q = f.field.p**r
    return (
        _root_polynomial(f.numerator, q) is not None
        and _root_polynomial(f.denominator, q) is not None
    )


@dataclass(frozen=True)
class PBasisCoordinates:
    """
    Coordinates of an element of K in the p-basis x^m, 0 <= m_i < p^level, over K^(p^level).

    Only nonzero coordinates are stored; every stored value lies in K^(p^level).
    """

    field: FunctionField
    level: int
    coords: Mapping[Exponent, RationalFunction]

    def get(self, exponents: Exponent) -> RationalFunction:
        return self.coords.get(tuple(exponents), self.field.zero)

    def __iter__(self) -> Iterator[Exponent]:
        return iter(sorted(self.coords))

    @property
    def is_scalar(self) -> bool:
        """True iff only the coordinate of x^0 is nonzero."""
        return all(all(e == 0 for e in m) for m in self.coords)


def pbasis_decompose(
    f: RationalFunction, r: int, budget: Optional[BudgetSettings] = None
) -> PBasisCoordinates:
    """
    Decompose f in the p-basis of K over K^(p^r).

    With q = p^r, f = (num * den^(q-1)) / den^q; the numerator is split by exponents
    mod q, and each bucket divided by den^q is a coordinate in K^q.

    Args:
        f: The element to decompose.
        r: The level, 1 <= r <= height budget.
        budget: Optional budget.

    Returns:
        The coordinates, with zero coordinates omitted.

    Raises:
        HeightBudgetExceeded: If r is out of range.
    """
    settings = resolve(budget)
    if r < 1 or r > settings.height_budget:
        raise HeightBudgetExceeded(
            f"level {r} outside 1..{settings.height_budget}"
        )
    field_ = f.field
    if f.is_zero:
        return PBasisCoordinates(field_, r, {})
    q = field_.p**r
    ring = field_.ring
    if f.is_polynomial:
        lifted = f.numerator
        base = ring.one
    else:
        lifted = f.numerator * f.denominator ** (q - 1)
        base = frobenius_polynomial(f.denominator, q)
    buckets: dict[Exponent, dict[Exponent, object]] = {}
    for monom, coeff in lifted.items():
        rho = tuple(e % q for e in monom)
        buckets.setdefault(rho, {})[tuple(e - s for e, s in zip(monom, rho))] = coeff
    coords = {
        rho: normalize(field_, ring.from_dict(terms), base) for rho, terms in buckets.items()
    }
    return PBasisCoordinates(field_, r, coords)


def reconstruct(coordinates: PBasisCoordinates) -> RationalFunction:
    """Inverse of pbasis_decompose: sum of coords[m] * x^m."""
    field_ = coordinates.field
    total = field_.zero
    for m, value in coordinates.coords.items():
        total = total + value * field_.monomial(m)
    return total


# ============================================================================
# Sampling
# ============================================================================


def random_polynomial(
    field_: FunctionField,
    rng: random.Random,
    max_degree: int = VERIFY_RANDOM_DEGREE,
    max_terms: int = VERIFY_RANDOM_TERMS,
) -> PolyElement:
    terms: dict[Exponent, int] = {}
    for _ in range(rng.randint(1, max_terms)):
        monom = tuple(rng.randint(0, max_degree) for _ in range(field_.n))
        terms[monom] = rng.randint(1, field_.p - 1)
    return field_.ring.from_dict(terms)


def random_rational_function(
    field_: FunctionField,
    rng: random.Random,
    max_degree: int = VERIFY_RANDOM_DEGREE,
    max_terms: int = VERIFY_RANDOM_TERMS,
) -> RationalFunction:
    """Sample a rational function with small random numerator and nonzero denominator."""
    numerator = random_polynomial(field_, rng, max_degree, max_terms)
    denominator = field_.ring.zero
    while not denominator:
        denominator = random_polynomial(field_, rng, max_degree, max_terms)
    return normalize(field_, numerator, denominator)
