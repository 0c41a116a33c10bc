"""
Verification of module-algebra actions and the faithfulness / generic-freeness tests.

verify_action() checks

- relations: v(T)^(p^m) = v(Q), v(E)^p = v(E) for multiplicative generators, and the
  declared commutators of non-commutative presentations
- commutation: every other pair of generators commutes
- compatibility with products: v(T)(fg) = v(T)(f) g + f v(T)(g) + sum c v(A)(f) v(B)(g)
- Diff+: v(T)(1) = 0

Both sides of the product identity are bi-differential operators whose order in x_i is
at most the largest x_i-order of the operators involved. By triangularity of
d^[a](x^m) = C(m, a) x^(m - a), they agree iff they agree on all pairs of monomials
with exponents inside that box, so the monomial test is exact. Random rational pairs
exercise the quotient paths on top, n * q times fewer than configured (q = p^r lifts
every operator involved). Both sides stay unreduced fractions and are compared by
cross-multiplication. Failures are recorded with a witness, never raised.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Optional

from sympy.polys.rings import PolyElement, PolyRing

from src.actions.action import ModuleAlgebraAction, OperatorEvaluator, socle_operators
from src.diffop.operator import (
    DiffOp,
    apply,
    commutator,
    derivation_coefficients,
    is_derivation,
    lift_apply,
    order_level,
    power,
)
from src.diffop.parser import format_operator
from src.field.parser import format_rational
from src.field.rational_function import (
    Exponent,
    FunctionField,
    random_rational_function,
)
from src.solver.linear_algebra import prime_field_rows, rank_over_field, rank_over_prime_field
from src.utils.constants import VERIFY_MIN_RANDOM_PAIRS, CheckKind
from src.utils.errors import ActionsError, NotSupported
from src.utils.logging import (
    log_check,
    log_debug,
    log_info,
    log_process_end,
    log_process_start,
)
from src.utils.settings import BudgetSettings, resolve


@dataclass(frozen=True)
class CheckResult:
    kind: CheckKind
    subject: str
    passed: bool
    witness: Optional[str] = None


@dataclass(frozen=True)
class VerificationReport:
    """
    Outcome of verify_action.

    test_level is the N with every operator order below p^N; faithful and
    generically_free are None when the criterion does not apply.
    """

    checks: tuple[CheckResult, ...]
    test_level: int
    faithful: Optional[bool] = None
    generically_free: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def of_kind(self, kind: CheckKind) -> list[CheckResult]:
        return [check for check in self.checks if check.kind is kind]

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]


def _record(
    checks: list[CheckResult],
    kind: CheckKind,
    subject: str,
    passed: bool,
    witness: Optional[str] = None,
) -> None:
    log_check(kind.value, subject, passed)
    checks.append(CheckResult(kind, subject, passed, witness))


def _guarded(
    checks: list[CheckResult], kind: CheckKind, subject: str, body: Callable[[], Optional[str]]
) -> None:
    """Run body, which returns a witness on failure and None on success."""
    try:
        witness = body()
    except ActionsError as e:
        _record(checks, kind, subject, False, f"{type(e).__name__}: {e}")
        return
    _record(checks, kind, subject, witness is None, witness)


def _difference_witness(left: DiffOp, right: DiffOp) -> Optional[str]:
    if left == right:
        return None
    return f"difference {format_operator(left - right)}"


# ============================================================================
# Individual checks
# ============================================================================


def _relation_checks(
    action: ModuleAlgebraAction,
    evaluator: OperatorEvaluator,
    checks: list[CheckResult],
) -> None:
    p = action.p
    for gen in action.dual.generators:
        op = action.operator(gen.name)
        if gen.is_multiplicative:
            subject = f"{gen.name}^{p} = {gen.name}"
            _guarded(
                checks,
                CheckKind.RELATION,
                subject,
                lambda op=op: _difference_witness(power(op, p, evaluator.budget), op),
            )
            continue
        exponent = p**gen.p_exponent
        subject = f"{gen.name}^{exponent} = relation"
        _guarded(
            checks,
            CheckKind.RELATION,
            subject,
            lambda gen=gen, exponent=exponent: _difference_witness(
                evaluator.generator_power(gen.name, exponent),
                evaluator.polynomial(gen.relation_tail),
            ),
        )
    for left, right, value in action.dual.extra_commutators:
        _guarded(
            checks,
            CheckKind.RELATION,
            f"[{left}, {right}] = declared value",
            lambda left=left, right=right, value=value: _difference_witness(
                commutator(action.operator(left), action.operator(right), evaluator.budget),
                evaluator.polynomial(value),
            ),
        )


def _commutation_checks(
    action: ModuleAlgebraAction,
    evaluator: OperatorEvaluator,
    checks: list[CheckResult],
) -> None:
    declared = {frozenset((a, b)) for a, b, _ in action.dual.extra_commutators}
    names = action.dual.names
    for i, left in enumerate(names):
        for right in names[i + 1 :]:
            if frozenset((left, right)) in declared:
                continue
            _guarded(
                checks,
                CheckKind.COMMUTATION,
                f"[{left}, {right}] = 0",
                lambda left=left, right=right: _difference_witness(
                    commutator(action.operator(left), action.operator(right), evaluator.budget),
                    DiffOp.zero(action.field),
                ),
            )


def _variable_bounds(ops: list[DiffOp], n: int) -> tuple[int, ...]:
    bounds = [0] * n
    for op in ops:
        for orders in op.terms:
            bounds = [max(b, o) for b, o in zip(bounds, orders)]
    return tuple(bounds)


Fraction = tuple[PolyElement, PolyElement]


def _fraction_sum(ring: PolyRing, terms: list[Fraction]) -> Fraction:
    """Sum value/scale pairs over the product of their distinct scales."""
    grouped: dict[PolyElement, PolyElement] = {}
    for value, scale in terms:
        if value:
            grouped[scale] = grouped.get(scale, ring.zero) + value
    total, common = ring.zero, ring.one
    for scale, value in grouped.items():
        total, common = total * scale + value * common, common * scale
    return total, common


def _same_fraction(left: Fraction, right: Fraction) -> bool:
    return left[0] * right[1] == right[0] * left[1]


class _LiftCache:
    """Unreduced values of operators on monomials, keyed by operator identity."""

    def __init__(self, action: ModuleAlgebraAction) -> None:
        self.field = action.field
        self._values: dict[tuple[int, Exponent], Fraction] = {}
        self._alive: list[DiffOp] = []

    def value(self, op: DiffOp, exponents: Exponent) -> Fraction:
        key = (id(op), exponents)
        if key not in self._values:
            self._alive.append(op)
            self._values[key] = lift_apply(
                op, self.field.monomial_polynomial(exponents), self.field.ring.one, 1
            )
        return self._values[key]


def random_pair_count(settings: BudgetSettings, n: int, q: int) -> int:
    """Random pairs for one generator: the configured count divided by n * q, floored."""
    return min(
        settings.random_pairs,
        max(VERIFY_MIN_RANDOM_PAIRS, settings.random_pairs // (n * q)),
    )


def _compatibility_checks(
    action: ModuleAlgebraAction,
    evaluator: OperatorEvaluator,
    settings: BudgetSettings,
    checks: list[CheckResult],
) -> None:
    field_ = action.field
    ring = field_.ring
    cache = _LiftCache(action)
    for position, gen in enumerate(action.dual.generators):
        op = action.operator(gen.name)
        if not gen.comul_tail and is_derivation(op):
            _record(checks, CheckKind.COMPATIBILITY, f"{gen.name} (derivation)", True)
            continue
        try:
            tail = [
                (c, evaluator.monomial(a), evaluator.monomial(b)) for c, a, b in gen.comul_tail
            ]
        except ActionsError as e:
            _record(
                checks,
                CheckKind.COMPATIBILITY,
                gen.name,
                False,
                f"{type(e).__name__}: {e}",
            )
            continue
        involved = [op] + [x for _, a, b in tail for x in (a, b)]
        bounds = _variable_bounds(involved, field_.n)
        box = list(product(*(range(b + 1) for b in bounds)))

        def monomial_witness() -> Optional[str]:
            for a, b in product(box, box):
                ab = tuple(i + j for i, j in zip(a, b))
                xa, xb = field_.monomial_polynomial(a), field_.monomial_polynomial(b)
                value_a, scale_a = cache.value(op, a)
                value_b, scale_b = cache.value(op, b)
                terms = [(value_a * xb, scale_a), (xa * value_b, scale_b)]
                for c, first, second in tail:
                    value_f, scale_f = cache.value(first, a)
                    value_s, scale_s = cache.value(second, b)
                    terms.append((value_f * value_s * c, scale_f * scale_s))
                if not _same_fraction(cache.value(op, ab), _fraction_sum(ring, terms)):
                    f, g = field_.monomial(a), field_.monomial(b)
                    return f"f = {format_rational(f)}, g = {format_rational(g)}"
            return None

        _guarded(
            checks,
            CheckKind.COMPATIBILITY,
            f"{gen.name} (monomials up to {bounds})",
            monomial_witness,
        )

        q = field_.p ** max(order_level(x) for x in involved)
        pairs = random_pair_count(settings, field_.n, q)

        def random_witness() -> Optional[str]:
            # Every term is written over the base (Df * Dg)^q.
            rng = random.Random(settings.random_seed + position)
            for _ in range(pairs):
                f = random_rational_function(field_, rng)
                g = random_rational_function(field_, rng)
                nf, df, ng, dg = f.numerator, f.denominator, g.numerator, g.denominator
                left = lift_apply(op, nf * ng, df * dg, q)
                value_f, scale_f = lift_apply(op, nf, df, q)
                value_g, scale_g = lift_apply(op, ng, dg, q)
                terms = [
                    (value_f * ng * dg ** (q - 1), scale_f),
                    (nf * df ** (q - 1) * value_g, scale_g),
                ]
                for c, first, second in tail:
                    value_a, scale_a = lift_apply(first, nf, df, q)
                    value_b, scale_b = lift_apply(second, ng, dg, q)
                    terms.append((value_a * value_b * c, scale_a * scale_b))
                if not _same_fraction(left, _fraction_sum(ring, terms)):
                    return f"f = {format_rational(f)}, g = {format_rational(g)}"
            return None

        _guarded(
            checks,
            CheckKind.COMPATIBILITY,
            f"{gen.name} ({pairs} random pairs)",
            random_witness,
        )


def _diff_plus_checks(action: ModuleAlgebraAction, checks: list[CheckResult]) -> None:
    one = action.field.one
    for name, op in action.assignment.items():
        value = apply(op, one)
        _record(
            checks,
            CheckKind.DIFF_PLUS,
            f"{name}(1) = 0",
            value.is_zero,
            None if value.is_zero else f"{name}(1) = {format_rational(value)}",
        )


# ============================================================================
# Entry points
# ============================================================================


def verify_action(
    action: ModuleAlgebraAction, budget: Optional[BudgetSettings] = None
) -> VerificationReport:
    """Run every check and attach the faithfulness verdicts."""
    settings = resolve(budget)
    log_process_start("verify_action")
    evaluator = OperatorEvaluator(action, settings)
    checks: list[CheckResult] = []
    _relation_checks(action, evaluator, checks)
    _commutation_checks(action, evaluator, checks)
    _compatibility_checks(action, evaluator, settings, checks)
    _diff_plus_checks(action, checks)
    test_level = max((order_level(op) for op in action.assignment.values()), default=0)

    faithful: Optional[bool] = None
    free: Optional[bool] = None
    try:
        faithful = is_faithful(action, settings)
    except ActionsError as e:
        log_debug(f"faithfulness not decided: {e}")
    try:
        free = is_generically_free(action, settings)
    except ActionsError as e:
        log_debug(f"generic freeness not decided: {e}")

    report = VerificationReport(tuple(checks), test_level, faithful, free)
    log_process_end("verify_action", success=report.passed)
    return report


def _independent_over_prime_field(ops: list[DiffOp], field_: FunctionField) -> bool:
    if not ops:
        return True
    keys = sorted({orders for op in ops for orders in op.terms})
    if not keys:
        return False
    vectors = [[op.coefficient(orders) for orders in keys] for op in ops]
    return rank_over_prime_field(field_.p, prime_field_rows(field_, vectors)) == len(ops)


def is_faithful(action: ModuleAlgebraAction, budget: Optional[BudgetSettings] = None) -> bool:
    """
    True iff the socle acts faithfully: its unipotent operators are F_p-independent and
    so are its multiplicative ones.

    Raises:
        NotSupported: For non-commutative presentations.
    """
    if not action.dual.commutative:
        raise NotSupported("faithfulness is decided for commutative groups")
    unipotent, multiplicative = socle_operators(action, budget)
    return _independent_over_prime_field(
        unipotent, action.field
    ) and _independent_over_prime_field(multiplicative, action.field)


def is_generically_free(
    action: ModuleAlgebraAction, budget: Optional[BudgetSettings] = None
) -> bool:
    """
    True iff the socle derivations are K-linearly independent.

    For a non-commutative presentation the same test runs on the operators of ker F.

    Raises:
        NotADerivation: If a socle operator is not a derivation.
    """
    if not action.dual.commutative:
        log_info("non-commutative group: generic freeness decided on ker F")
    unipotent, multiplicative = socle_operators(action, budget)
    derivations = unipotent + multiplicative
    if not derivations:
        return True
    if len(derivations) > action.field.n:
        return False
    rows = [list(derivation_coefficients(op)) for op in derivations]
    return rank_over_field(action.field, rows) == len(derivations)
