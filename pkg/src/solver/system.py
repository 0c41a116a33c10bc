"""
Solving D(x) = a and systems of commuting differential equations in K.

Every operator of order below p^r is K^(p^r)-linear, so an equation D(x) = a becomes a
linear system over K^(p^r) in the p-basis coordinates of x. The matrix entries lie in
K^(p^r); taking p^r-th roots moves the system down to K, where it is solved by
fraction-free elimination, and Frobenius brings the solution back up.

A DiffSystem D_i(x) = a_i (i = 1..m) is solvable iff

    D_i^(p^l_i - 1)(a_i) = F~_i(a_1, ..., a_m)   for every i,

where D_i^(p^l_i) = F_i(D_1, ..., D_m) and F~ is obtained from a decomposition
F = sum X_i Q_i by F~(a) = sum Q_i(D)(a_i).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from src.diffop.operator import (
    DiffOp,
    apply,
    commutator,
    compose,
    matrix_over_subfield,
    order_level,
    power,
    sum_operators,
)
from src.field.rational_function import (
    Exponent,
    FunctionField,
    RationalFunction,
    frobenius,
    pbasis_decompose,
    pth_root,
)
from src.solver.linear_algebra import FractionFreeEliminator
from src.utils.errors import (
    Incompatible,
    InvalidSystem,
    NoSolution,
    OperatorInvariantError,
    OrderTooHighForLevel,
)
from src.utils.logging import log_debug, log_process_end, log_process_start
from src.utils.settings import BudgetSettings

Reduction = Mapping[Exponent, int]


# ============================================================================
# Systems
# ============================================================================


@dataclass(frozen=True)
class DiffSystem:
    """
    Equations D_i(x) = a_i with D_i^(p^order_exponents[i]) = reductions[i](D_1, ..., D_m).

    A reduction is a polynomial without constant term in m commuting indeterminates,
    stored as {exponent vector: coefficient}.
    """

    field: FunctionField
    operators: tuple[DiffOp, ...]
    rhs: tuple[RationalFunction, ...]
    order_exponents: tuple[int, ...]
    reductions: tuple[Reduction, ...] = ()

    def __post_init__(self) -> None:
        m = len(self.operators)
        reductions = self.reductions or tuple({} for _ in range(m))
        object.__setattr__(self, "reductions", tuple(reductions))
        if not (len(self.rhs) == len(self.order_exponents) == len(reductions) == m):
            raise InvalidSystem("operators, rhs, orders and reductions differ in length")
        for op, a in zip(self.operators, self.rhs):
            if op.field != self.field or a.field != self.field:
                raise InvalidSystem("system entries belong to different fields")
        for l in self.order_exponents:
            if l < 1:
                raise InvalidSystem("order exponents must be positive")
        for reduction in reductions:
            for exponents in reduction:
                if len(exponents) != m:
                    raise InvalidSystem(f"reduction monomial {exponents} has the wrong arity")
                if not any(exponents):
                    raise InvalidSystem("reductions must have zero constant term")

    @property
    def size(self) -> int:
        return len(self.operators)

    def level(self) -> int:
        """Smallest level r with every operator order below p^r."""
        return max((order_level(op) for op in self.operators), default=1) or 1

    def assert_commuting(self, budget: Optional[BudgetSettings] = None) -> None:
        """
        Raises:
            InvalidSystem: If two operators do not commute.
        """
        for i in range(self.size):
            for j in range(i + 1, self.size):
                if not commutator(self.operators[i], self.operators[j], budget).is_zero:
                    raise InvalidSystem(f"operators {i + 1} and {j + 1} do not commute")

    def reductions_hold(self, budget: Optional[BudgetSettings] = None) -> bool:
        """True iff D_i^(p^l_i) equals F_i(D_1, ..., D_m) as operators."""
        p = self.field.p
        for op, l, reduction in zip(self.operators, self.order_exponents, self.reductions):
            if power(op, p**l, budget) != evaluate_reduction(reduction, self.operators, budget):
                return False
        return True


def evaluate_reduction(
    reduction: Reduction, operators: Sequence[DiffOp], budget: Optional[BudgetSettings] = None
) -> DiffOp:
    """F(D_1, ..., D_m) as an operator."""
    field_ = operators[0].field if operators else None
    terms = []
    for exponents, coeff in sorted(reduction.items()):
        factors = [
            power(op, e, budget) for op, e in zip(operators, exponents) if e
        ]
        product_op = factors[0]
        for factor in factors[1:]:
            product_op = compose(product_op, factor, budget)
        terms.append(product_op.scale(coeff))
    if field_ is None:
        raise InvalidSystem("a reduction needs operators")
    return sum_operators(field_, terms)


def _apply_power(op: DiffOp, exponent: int, f: RationalFunction) -> RationalFunction:
    for _ in range(exponent):
        if f.is_zero:
            break
        f = apply(op, f)
    return f


def ftilde(
    reduction: Reduction,
    rhs: Sequence[RationalFunction],
    operators: Sequence[DiffOp],
    field_: FunctionField,
) -> RationalFunction:
    """
    F~(a_1, ..., a_m) for F = sum X_i Q_i.

    Monomials of F are visited in lex order and each X^alpha is attributed to the
    smallest-index indeterminate occurring in it.
    """
    total = field_.zero
    for exponents, coeff in sorted(reduction.items()):
        i = next(k for k, e in enumerate(exponents) if e)
        rest = list(exponents)
        rest[i] -= 1
        value = rhs[i]
        for op, e in zip(operators, rest):
            value = _apply_power(op, e, value)
        total = total + value * coeff
    return total


def check_compatibility(system: DiffSystem) -> bool:
    """True iff the symmetry D_i(a_j) = D_j(a_i) and every order condition hold."""
    ops, rhs = system.operators, system.rhs
    for i in range(system.size):
        for j in range(i + 1, system.size):
            if apply(ops[i], rhs[j]) != apply(ops[j], rhs[i]):
                log_debug(f"symmetry fails for equations {i + 1} and {j + 1}")
                return False
    p = system.field.p
    for i, (op, l, reduction) in enumerate(
        zip(ops, system.order_exponents, system.reductions)
    ):
        left = _apply_power(op, p**l - 1, rhs[i])
        if left != ftilde(reduction, rhs, ops, system.field):
            log_debug(f"order condition fails for equation {i + 1}")
            return False
    return True


# ============================================================================
# Linear solves
# ============================================================================


def _descended_rhs(
    a: RationalFunction, basis: Sequence[Exponent], r: int, budget: Optional[BudgetSettings]
) -> list[RationalFunction]:
    coordinates = pbasis_decompose(a, r, budget)
    return [pth_root(coordinates.get(m), r) for m in basis]


def _solve_stacked(
    field_: FunctionField,
    equations: Sequence[tuple[DiffOp, RationalFunction]],
    r: int,
    budget: Optional[BudgetSettings] = None,
) -> Optional[RationalFunction]:
    """Solve every op(x) = value at level r; None if the linear system is inconsistent."""
    rows: list[list[RationalFunction]] = []
    basis: tuple[Exponent, ...] = tuple(field_.box(r))
    for op, value in equations:
        matrix = matrix_over_subfield(op, r, budget)
        descended = matrix.descended()
        values = _descended_rhs(value, matrix.basis, r, budget)
        rows.extend(row + [v] for row, v in zip(descended, values))
    eliminator = FractionFreeEliminator.from_rational_rows(field_, rows, augmented=True)
    log_debug(
        f"stacked system: {len(rows)} rows, {len(basis)} unknowns, rank {eliminator.rank}"
    )
    coordinates = eliminator.solve()
    if coordinates is None:
        return None
    x = field_.zero
    for m, c in zip(basis, coordinates):
        if not c.is_zero:
            x = x + frobenius(c, r) * field_.monomial(m)
    return x


def _check_level(ops: Sequence[DiffOp], r: int) -> None:
    for op in ops:
        if order_level(op) > r:
            raise OrderTooHighForLevel(
                f"operator order {op.max_order} is not below p^{r}"
            )


def solve_single(
    op: DiffOp,
    a: RationalFunction,
    level: int,
    constraints: Sequence[DiffOp] = (),
    budget: Optional[BudgetSettings] = None,
) -> RationalFunction:
    """
    Find x with op(x) = a and c(x) = 0 for every constraint c.

    Args:
        op: The operator, of order below p^level.
        a: The right-hand side.
        level: The level r of the p-basis used for the linear system.
        constraints: Operators that must annihilate x.
        budget: Optional budget.

    Returns:
        The solution whose free p-basis coordinates are zero.

    Raises:
        OrderTooHighForLevel: If an operator has order p^level or more.
        NoSolution: If no such x exists.
    """
    _check_level([op, *constraints], level)
    equations = [(op, a)] + [(c, op.field.zero) for c in constraints]
    x = _solve_stacked(op.field, equations, level, budget)
    if x is None:
        raise NoSolution(f"{op!r}(x) = {a!r} has no solution")
    if apply(op, x) != a or any(not apply(c, x).is_zero for c in constraints):
        raise OperatorInvariantError("linear solve returned a wrong solution")
    return x


def solve_system(
    system: DiffSystem, level: Optional[int] = None, budget: Optional[BudgetSettings] = None
) -> RationalFunction:
    """
    Find x with D_i(x) = a_i for all i.

    Raises:
        OrderTooHighForLevel: If an operator order reaches p^level.
        Incompatible: If the compatibility conditions fail.
    """
    level = level or system.level()
    log_process_start(f"solve_system ({system.size} equations, level {level})")
    _check_level(system.operators, level)
    if not check_compatibility(system):
        log_process_end("solve_system", success=False)
        raise Incompatible("the system fails the compatibility conditions")
    if system.size == 0:
        log_process_end("solve_system")
        return system.field.zero
    x = _solve_stacked(system.field, list(zip(system.operators, system.rhs)), level, budget)
    if x is None:
        log_process_end("solve_system", success=False)
        raise Incompatible("compatible system without solution at this level")
    for op, a in zip(system.operators, system.rhs):
        if apply(op, x) != a:
            raise OperatorInvariantError("linear solve returned a wrong solution")
    log_process_end("solve_system")
    return x


def solve_system_by_recursion(
    system: DiffSystem, level: Optional[int] = None, budget: Optional[BudgetSettings] = None
) -> RationalFunction:
    """
    Solve equation by equation: x = x_1 + y_2 + ... with y_i killed by D_1..D_(i-1).

    Raises:
        Incompatible: If some step has no solution.
    """
    level = level or system.level()
    field_ = system.field
    x = field_.zero
    for i, (op, a) in enumerate(zip(system.operators, system.rhs)):
        residual = a - apply(op, x)
        try:
            y = solve_single(op, residual, level, system.operators[:i], budget)
        except NoSolution as e:
            raise Incompatible(f"equation {i + 1} has no correction") from e
        x = x + y
    return x


# ============================================================================
# Kernels and images
# ============================================================================


def kernel_basis(
    ops: Sequence[DiffOp], level: int, budget: Optional[BudgetSettings] = None
) -> list[RationalFunction]:
    """A K^(p^level)-basis of the joint kernel of the operators."""
    if not ops:
        raise InvalidSystem("kernel_basis needs at least one operator")
    _check_level(ops, level)
    field_ = ops[0].field
    rows: list[list[RationalFunction]] = []
    basis = tuple(field_.box(level))
    for op in ops:
        rows.extend(matrix_over_subfield(op, level, budget).descended())
    eliminator = FractionFreeEliminator.from_rational_rows(field_, rows)
    elements = []
    for vector in eliminator.nullspace():
        x = field_.zero
        for m, c in zip(basis, vector):
            if not c.is_zero:
                x = x + frobenius(c, level) * field_.monomial(m)
        elements.append(x)
    return elements


def operator_rank(op: DiffOp, level: int, budget: Optional[BudgetSettings] = None) -> int:
    """Rank of op as a K^(p^level)-linear map of K."""
    _check_level([op], level)
    rows = matrix_over_subfield(op, level, budget).descended()
    return FractionFreeEliminator.from_rational_rows(op.field, rows).rank
