"""
Divided-power differential operators on K = F_p(x_1, ..., x_n).

An operator is a finite sum of terms c_a * d^[a] where a is a nonzero vector of
divided-power orders and c_a is a rational function. d^[a] acts on monomials by
d^[a](x^m) = C(m, a) x^(m - a), with binomials taken mod p. Operators never carry a
pure multiplication term (a = 0), so they annihilate constants.

Composition straightens products with the Leibniz rule for divided powers:

    d^[a] o e = sum over g <= a of d^[g](e) d^[a - g]
    d^[b] o d^[c] = C(b + c, b) d^[b + c]

Usage:
    from src.diffop.operator import DiffOp, apply, compose, power

    D = DiffOp.partial(K, "x") + K.variable("x").__pow__(2) * DiffOp.partial(K, "y")
    assert power(D, 4).is_zero
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Optional, Union

from sympy.polys.rings import PolyElement

from src.diffop.binomial import multi_binomial
from src.field.rational_function import (
    Exponent,
    FunctionField,
    RationalFunction,
    frobenius,
    frobenius_polynomial,
    normalize,
    pbasis_decompose,
    pth_root,
)
from src.utils.errors import (
    InvalidVariables,
    NotADerivation,
    NotNilpotentWithinBudget,
    OperatorInvariantError,
    OrderBudgetExceeded,
    OrderTooHighForLevel,
    ZeroOperator,
)
from src.utils.settings import BudgetSettings, resolve

Orders = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class DiffOp:
    """A divided-power differential operator without constant term."""

    field: FunctionField
    terms: Mapping[Orders, RationalFunction]

    @classmethod
    def from_terms(
        cls, field: FunctionField, terms: Mapping[Orders, RationalFunction]
    ) -> DiffOp:
        """
        Build an operator, dropping zero coefficients.

        Raises:
            OperatorInvariantError: If a nonzero pure multiplication term is present.
            InvalidVariables: If an order vector has the wrong length.
        """
        clean: dict[Orders, RationalFunction] = {}
        for orders, coefficient in terms.items():
            orders = tuple(orders)
            if len(orders) != field.n:
                raise InvalidVariables(
                    f"order vector {orders} does not match {field.n} variables"
                )
            if coefficient.is_zero:
                continue
            if not any(orders):
                raise OperatorInvariantError("operator acquired a multiplication term")
            clean[orders] = coefficient
        return cls(field, clean)

    @classmethod
    def zero(cls, field: FunctionField) -> DiffOp:
        return cls(field, {})

    @classmethod
    def monomial(
        cls, field: FunctionField, orders: Orders, coefficient: Optional[RationalFunction] = None
    ) -> DiffOp:
        if coefficient is None:
            coefficient = field.one
        return cls.from_terms(field, {tuple(orders): coefficient})

    @classmethod
    def partial(cls, field: FunctionField, variable: str, order: int = 1) -> DiffOp:
        """The divided power d^[order] with respect to one variable."""
        orders = [0] * field.n
        orders[field.index(variable)] = order
        return cls.monomial(field, tuple(orders))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def max_order(self) -> int:
        """Largest single-variable order occurring in the operator."""
        return max((max(orders) for orders in self.terms), default=0)

    def coefficient(self, orders: Orders) -> RationalFunction:
        return self.terms.get(tuple(orders), self.field.zero)

    def scale(self, factor: Union[int, RationalFunction]) -> DiffOp:
        """Left multiplication factor * self."""
        factor = self.field.coerce(factor)
        return DiffOp.from_terms(
            self.field, {orders: factor * c for orders, c in self.terms.items()}
        )

    def __add__(self, other: DiffOp) -> DiffOp:
        _check_same_field(self, other)
        terms = dict(self.terms)
        for orders, coefficient in other.terms.items():
            terms[orders] = terms.get(orders, self.field.zero) + coefficient
        return DiffOp.from_terms(self.field, terms)

    def __neg__(self) -> DiffOp:
        return DiffOp(self.field, {orders: -c for orders, c in self.terms.items()})

    def __sub__(self, other: DiffOp) -> DiffOp:
        return self + (-other)

    def __rmul__(self, factor: Union[int, RationalFunction]) -> DiffOp:
        return self.scale(factor)

    def __matmul__(self, other: DiffOp) -> DiffOp:
        return compose(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.field == other.field and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.field, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        from src.diffop.parser import format_operator

        return f"DiffOp({format_operator(self)!r})"


def _check_same_field(left: DiffOp, right: DiffOp) -> None:
    if left.field != right.field:
        raise InvalidVariables("operators belong to different fields")


# ============================================================================
# Action on K
# ============================================================================


def divided_power_polynomial(polynomial: PolyElement, orders: Orders, p: int) -> PolyElement:
    """Apply d^[orders] to a polynomial term by term."""
    terms = {}
    for monom, coeff in polynomial.items():
        binomial = multi_binomial(monom, orders, p)
        if binomial:
            terms[tuple(m - a for m, a in zip(monom, orders))] = coeff * binomial
    return polynomial.ring.from_dict(terms)


def order_level(op: DiffOp) -> int:
    """Smallest r with every order below p^r; 0 for the zero operator."""
    if op.is_zero:
        return 0
    p = op.field.p
    bound = op.max_order
    r = 1
    while p**r <= bound:
        r += 1
    return r


def lift_apply(
    op: DiffOp, numerator: PolyElement, denominator: PolyElement, q: int
) -> tuple[PolyElement, PolyElement]:
    """
    Evaluate op on numerator/denominator without cancelling common factors.

    q must be a power of p above every order of op. The result (value, scale)
    satisfies op(numerator/denominator) = value / (denominator^q * scale).
    Terms are grouped by coefficient denominator, so no gcd is ever taken.
    """
    p = op.field.p
    ring = op.field.ring
    lifted = numerator * denominator ** (q - 1)
    groups: dict[PolyElement, PolyElement] = {}
    for orders, coefficient in op.terms.items():
        derived = divided_power_polynomial(lifted, orders, p)
        if derived:
            key = coefficient.denominator
            groups[key] = groups.get(key, ring.zero) + coefficient.numerator * derived
    value, scale = ring.zero, ring.one
    for key, part in groups.items():
        value, scale = value * key + part * scale, scale * key
    return value, scale


def apply(op: DiffOp, f: RationalFunction) -> RationalFunction:
    """
    Evaluate op(f).

    For rational f with q = p^r above every order, f = (num * den^(q-1)) / den^q and
    each d^[a] is K^q-linear, so only the numerator is differentiated.
    """
    field = op.field
    if f.field != field:
        raise InvalidVariables("operator and function belong to different fields")
    if op.is_zero or f.is_zero:
        return field.zero
    if f.is_polynomial:
        value, scale = lift_apply(op, f.numerator, field.ring.one, 1)
        return normalize(field, value, scale)
    q = field.p ** order_level(op)
    value, scale = lift_apply(op, f.numerator, f.denominator, q)
    return normalize(field, value, frobenius_polynomial(f.denominator, q) * scale)


# ============================================================================
# Operator algebra
# ============================================================================


def compose(left: DiffOp, right: DiffOp, budget: Optional[BudgetSettings] = None) -> DiffOp:
    """
    Return left o right in normal form.

    Raises:
        OrderBudgetExceeded: If a resulting order reaches p**H.
    """
    _check_same_field(left, right)
    field = left.field
    p = field.p
    bound = resolve(budget).order_bound(p)
    accumulated: dict[Orders, RationalFunction] = {}
    derivatives: dict[tuple[Orders, Orders], RationalFunction] = {}
    for alpha, c in left.terms.items():
        for beta, e in right.terms.items():
            for gamma in product(*(range(a + 1) for a in alpha)):
                delta = tuple(a - g for a, g in zip(alpha, gamma))
                target = tuple(d + b for d, b in zip(delta, beta))
                binomial = multi_binomial(target, delta, p)
                if not binomial:
                    continue
                key = (gamma, beta)
                if key not in derivatives:
                    derivatives[key] = (
                        apply(DiffOp.monomial(field, gamma), e) if any(gamma) else e
                    )
                derivative = derivatives[key]
                if derivative.is_zero:
                    continue
                accumulated[target] = (
                    accumulated.get(target, field.zero) + c * derivative * binomial
                )
    result = DiffOp.from_terms(field, accumulated)
    for orders in result.terms:
        if max(orders) >= bound:
            raise OrderBudgetExceeded(
                f"order {max(orders)} reaches the bound {bound} = p^H"
            )
    return result


def commutator(left: DiffOp, right: DiffOp, budget: Optional[BudgetSettings] = None) -> DiffOp:
    return compose(left, right, budget) - compose(right, left, budget)


def power(op: DiffOp, exponent: int, budget: Optional[BudgetSettings] = None) -> DiffOp:
    """op composed with itself exponent >= 1 times, by binary powering."""
    if exponent < 1:
        raise OperatorInvariantError("the identity operator is not available")
    result: Optional[DiffOp] = None
    base = op
    while exponent:
        if exponent & 1:
            result = base if result is None else compose(result, base, budget)
        exponent >>= 1
        if exponent:
            base = compose(base, base, budget)
    assert result is not None
    return result


def is_derivation(op: DiffOp) -> bool:
    """True iff every term is a first-order partial derivative."""
    return all(sum(orders) == 1 for orders in op.terms)


def derivation_coefficients(op: DiffOp) -> tuple[RationalFunction, ...]:
    """Coefficients (c_1, ..., c_n) of a derivation sum c_i d_i."""
    if not is_derivation(op):
        raise NotADerivation(f"{op!r} is not a derivation")
    n = op.field.n
    return tuple(
        op.coefficient(tuple(1 if j == i else 0 for j in range(n))) for i in range(n)
    )


def derivation_order(op: DiffOp, budget: Optional[BudgetSettings] = None) -> int:
    """
    Return the nilpotency order p^t of a nonzero derivation.

    Raises:
        ZeroOperator: If op is zero.
        NotADerivation: If op has higher-order terms.
        NotNilpotentWithinBudget: If no D^(p^t) with t <= H vanishes.
    """
    if op.is_zero:
        raise ZeroOperator("the zero operator has no nilpotency order")
    if not is_derivation(op):
        raise NotADerivation(f"{op!r} is not a derivation")
    settings = resolve(budget)
    p = op.field.p
    current = op
    for t in range(1, settings.height_budget + 1):
        current = power(current, p, settings)
        if current.is_zero:
            return p**t
    raise NotNilpotentWithinBudget(
        f"no p-power up to p^{settings.height_budget} of the derivation vanishes"
    )


def frobenius_twist(op: DiffOp) -> DiffOp:
    """
    Return sum c^p d^[p a] for op = sum c d^[a].

    The twist satisfies twist(op)(f^p) = op(f)^p.
    """
    p = op.field.p
    return DiffOp(
        op.field,
        {tuple(p * a for a in orders): frobenius(c, 1) for orders, c in op.terms.items()},
    )


# ============================================================================
# Matrices over K^(p^r) and reconstruction from values
# ============================================================================


@dataclass(frozen=True)
class SubfieldMatrix:
    """
    Matrix of a K^(p^level)-linear operator in the p-basis of K.

    basis[j] is the exponent vector of the j-th basis monomial (lex order);
    entries[i][j] is the basis[i]-coordinate of op(x^basis[j]), an element of K^(p^level).
    """

    level: int
    basis: tuple[Exponent, ...]
    entries: tuple[tuple[RationalFunction, ...], ...]

    def descended(self) -> list[list[RationalFunction]]:
        """Entries replaced by their p^level-th roots."""
        return [[pth_root(entry, self.level) for entry in row] for row in self.entries]


def matrix_over_subfield(
    op: DiffOp, r: int, budget: Optional[BudgetSettings] = None
) -> SubfieldMatrix:
    """
    Matrix of op on K viewed as a K^(p^r)-vector space with basis x^m, m < p^r.

    Raises:
        OrderTooHighForLevel: If some order is at least p^r.
    """
    field = op.field
    q = field.p**r
    if op.max_order >= q:
        raise OrderTooHighForLevel(f"operator order {op.max_order} is not below {q}")
    basis = tuple(field.box(r))
    index = {m: i for i, m in enumerate(basis)}
    zero = field.zero
    entries = [[zero] * len(basis) for _ in basis]
    for j, m in enumerate(basis):
        image = apply(op, field.monomial(m))
        for rho, value in pbasis_decompose(image, r, budget).coords.items():
            entries[index[rho]][j] = value
    return SubfieldMatrix(r, basis, tuple(tuple(row) for row in entries))


def from_values(
    field: FunctionField, values: Mapping[Exponent, RationalFunction], r: int
) -> DiffOp:
    """
    The unique operator of orders below p^r with op(x^m) = values[m] for every m < p^r.

    Missing values are zero. Coefficients are peeled off by increasing total degree:
    c_a = values[a] - sum over 0 < b < a of c_b C(a, b) x^(a - b).

    Raises:
        OperatorInvariantError: If values[0] is nonzero.
    """
    p = field.p
    zero_vector = (0,) * field.n
    if not values.get(zero_vector, field.zero).is_zero:
        raise OperatorInvariantError("an operator without constant term kills 1")
    box = sorted(field.box(r), key=lambda m: (sum(m), m))
    coefficients: dict[Orders, RationalFunction] = {}
    for alpha in box:
        if alpha == zero_vector:
            continue
        value = values.get(alpha, field.zero)
        for beta, c in coefficients.items():
            if all(b <= a for a, b in zip(alpha, beta)):
                binomial = multi_binomial(alpha, beta, p)
                if binomial:
                    value = value - c * binomial * field.monomial(
                        tuple(a - b for a, b in zip(alpha, beta))
                    )
        if not value.is_zero:
            coefficients[alpha] = value
    return DiffOp.from_terms(field, coefficients)


def sum_operators(field: FunctionField, operators: Iterable[DiffOp]) -> DiffOp:
    total = DiffOp.zero(field)
    for op in operators:
        total = total + op
    return total
