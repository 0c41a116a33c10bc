"""
Module-algebra actions: an assignment of differential operators to the generators of a
dual presentation.

A rational action of a group G on X = Spec K corresponds to a map v from the dual
Hopf algebra to the divided-power operators on K. The map is fixed by its values on
the generators of dual(G); everything else (relations, comultiplication tails,
socle operators) is evaluated through evaluate_polynomial().
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Mapping, Optional, Sequence

from src.diffop.operator import DiffOp, compose, power, sum_operators
from src.field.rational_function import FunctionField
from src.groupscheme.descriptor import Explicit, GroupSchemeDescriptor, Product
from src.groupscheme.presentation import (
    GeneratorPolynomial,
    HopfPresentation,
    Monomial,
    concatenate,
    polynomial_names,
)
from src.utils.constants import PRODUCT_SUFFIX_SEPARATOR, VerificationState
from src.utils.errors import InvalidAction
from src.utils.settings import BudgetSettings

if TYPE_CHECKING:
    from src.actions.verification import VerificationReport


@dataclass(frozen=True)
class ModuleAlgebraAction:
    """
    An action of group on F_p(variables) given by one operator per dual generator.

    Attributes:
        field: The function field K.
        group: Descriptor of the acting group.
        dual: Presentation whose generators act.
        assignment: Generator name to operator.
        verified: Outcome of the last verify_action run.
        report: The report of that run, if any.
    """

    field: FunctionField
    group: GroupSchemeDescriptor
    dual: HopfPresentation
    assignment: Mapping[str, DiffOp]
    verified: VerificationState = VerificationState.UNCHECKED
    report: Optional["VerificationReport"] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.dual.p != self.field.p:
            raise InvalidAction("group and field have different characteristics")
        names = set(self.dual.names)
        missing = names - set(self.assignment)
        extra = set(self.assignment) - names
        if missing:
            raise InvalidAction(f"generators without operator: {sorted(missing)}")
        if extra:
            raise InvalidAction(f"operators for unknown generators: {sorted(extra)}")
        for name, op in self.assignment.items():
            if op.field != self.field:
                raise InvalidAction(f"operator of {name} lives on another field")
        ordered = {name: self.assignment[name] for name in self.dual.names}
        object.__setattr__(self, "assignment", ordered)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def variables(self) -> tuple[str, ...]:
        return self.field.variables

    def operator(self, name: str) -> DiffOp:
        try:
            return self.assignment[name]
        except KeyError as e:
            raise InvalidAction(f"unknown generator {name}") from e

    def with_report(self, report: "VerificationReport") -> ModuleAlgebraAction:
        state = VerificationState.PASSED if report.passed else VerificationState.FAILED
        return replace(self, verified=state, report=report)

    def renamed(self, dual: HopfPresentation, group: GroupSchemeDescriptor) -> ModuleAlgebraAction:
        """The same operators attached positionally to another presentation."""
        if len(dual.names) != len(self.dual.names):
            raise InvalidAction("presentations have different numbers of generators")
        assignment = {
            new: self.assignment[old] for new, old in zip(dual.names, self.dual.names)
        }
        return ModuleAlgebraAction(self.field, group, dual, assignment)


# ============================================================================
# Evaluation of generator polynomials
# ============================================================================


class OperatorEvaluator:
    """Evaluate monomials and polynomials in generator names, caching powers."""

    def __init__(
        self, action: ModuleAlgebraAction, budget: Optional[BudgetSettings] = None
    ) -> None:
        self.action = action
        self.budget = budget
        self._powers: dict[tuple[str, int], DiffOp] = {}
        self._monomials: dict[Monomial, DiffOp] = {}

    def generator_power(self, name: str, exponent: int) -> DiffOp:
        key = (name, exponent)
        if key not in self._powers:
            self._powers[key] = power(self.action.operator(name), exponent, self.budget)
        return self._powers[key]

    def monomial(self, mono: Monomial) -> DiffOp:
        if not mono:
            raise InvalidAction("the empty monomial has no operator without constant term")
        if mono not in self._monomials:
            result = self.generator_power(*mono[0])
            for name, exponent in mono[1:]:
                result = compose(result, self.generator_power(name, exponent), self.budget)
            self._monomials[mono] = result
        return self._monomials[mono]

    def polynomial(self, poly: GeneratorPolynomial) -> DiffOp:
        return sum_operators(
            self.action.field, (self.monomial(mono).scale(coeff) for coeff, mono in poly)
        )


def evaluate_polynomial(
    action: ModuleAlgebraAction,
    poly: GeneratorPolynomial,
    budget: Optional[BudgetSettings] = None,
) -> DiffOp:
    """v(poly) for a polynomial in generator names without constant term."""
    return OperatorEvaluator(action, budget).polynomial(poly)


# ============================================================================
# Socle, restriction and products
# ============================================================================


def socle_operators(
    action: ModuleAlgebraAction, budget: Optional[BudgetSettings] = None
) -> tuple[list[DiffOp], list[DiffOp]]:
    """
    Operators of the socle: unipotent part and multiplicative part.

    A level-1 unipotent generator U with U^(p^m) = 0 contributes v(U)^(p^(m-1)); a
    multiplicative generator contributes v(E).
    """
    evaluator = OperatorEvaluator(action, budget)
    unipotent, multiplicative = [], []
    for gen in action.dual.generators:
        if gen.level != 1:
            continue
        if gen.is_multiplicative:
            multiplicative.append(action.operator(gen.name))
        else:
            unipotent.append(evaluator.generator_power(gen.name, action.p ** (gen.p_exponent - 1)))
    return unipotent, multiplicative


def restrict(
    action: ModuleAlgebraAction,
    names: Sequence[str],
    group: Optional[GroupSchemeDescriptor] = None,
) -> ModuleAlgebraAction:
    """
    The action of the sub-presentation on the given generators.

    Raises:
        InvalidAction: If a kept generator refers to a dropped one.
    """
    keep = set(names)
    generators = tuple(g for g in action.dual.generators if g.name in keep)
    for gen in generators:
        dropped = gen.referenced() - keep - {gen.name}
        if dropped:
            raise InvalidAction(f"{gen.name} depends on dropped generators {sorted(dropped)}")
    commutators = tuple(
        (a, b, v)
        for a, b, v in action.dual.extra_commutators
        if {a, b} | polynomial_names(v) <= keep
    )
    sub = HopfPresentation(
        action.p, generators, action.dual.commutative or not commutators, commutators
    )
    if group is None:
        group = Explicit(action.p, presentation=None, dual_presentation=sub, name="restriction")
    return ModuleAlgebraAction(
        action.field, group, sub, {name: action.operator(name) for name in sub.names}
    )


def product_action(actions: Sequence[ModuleAlgebraAction]) -> ModuleAlgebraAction:
    """
    The action of the product group, factor k acting through its own operators.

    Generator names get the suffix _k.
    """
    if not actions:
        raise InvalidAction("a product needs at least one action")
    field_ = actions[0].field
    if any(a.field != field_ for a in actions):
        raise InvalidAction("product factors act on different fields")
    duals = []
    assignment: dict[str, DiffOp] = {}
    for k, action in enumerate(actions, start=1):
        suffix = f"{PRODUCT_SUFFIX_SEPARATOR}{k}"
        duals.append(action.dual.with_suffix(suffix))
        for name, op in action.assignment.items():
            assignment[f"{name}{suffix}"] = op
    group = Product(field_.p, tuple(a.group for a in actions))
    return ModuleAlgebraAction(field_, group, concatenate(duals), assignment)
