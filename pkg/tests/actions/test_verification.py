"""
Test suite for src/actions/verification.py
"""

import time

import pytest

from src.actions.action import ModuleAlgebraAction
from src.actions.construction import build_action, height_one_action
from src.actions.examples import (
    example_counterexample_surface,
    example_noncommutative,
    example_ptorsion,
)
from src.actions.verification import (
    is_faithful,
    is_generically_free,
    random_pair_count,
    verify_action,
)
from src.diffop.operator import DiffOp
from src.field.rational_function import function_field
from src.groupscheme.descriptor import HeightOne, KerFMinusV, dual
from src.groupscheme.young import YoungDiagram
from src.utils.constants import VERIFY_MIN_RANDOM_PAIRS, CheckKind, VerificationState
from src.utils.errors import NotSupported
from src.utils.settings import BudgetSettings


def test_report_of_a_valid_action(budget):
    action = example_counterexample_surface(2, budget=budget)
    report = verify_action(action, budget)
    assert report.passed
    assert report.failures == []
    assert report.test_level == 2
    assert len(report.of_kind(CheckKind.RELATION)) == 4
    assert len(report.of_kind(CheckKind.COMMUTATION)) == 6
    assert all(check.passed for check in report.of_kind(CheckKind.DIFF_PLUS))

    marked = action.with_report(report)
    assert marked.verified is VerificationState.PASSED
    assert marked == action.with_report(report)


def test_corrupted_relation_is_reported(budget):
    action = example_counterexample_surface(2, budget=budget)
    assignment = dict(action.assignment)
    assignment["T1"] = DiffOp.partial(action.field, "x", 2)
    corrupted = ModuleAlgebraAction(action.field, action.group, action.dual, assignment)
    report = verify_action(corrupted, budget)
    assert not report.passed
    failed = [check.subject for check in report.failures if check.kind is CheckKind.RELATION]
    assert failed == ["T1^2 = relation"]
    assert report.failures[0].witness.startswith("difference")
    assert corrupted.with_report(report).verified is VerificationState.FAILED


def test_product_rule_failure_is_reported(field_x2, budget):
    group = HeightOne(2, YoungDiagram((1,)))
    action = ModuleAlgebraAction(
        field_x2, group, dual(group), {"U1": DiffOp.partial(field_x2, "x", 2)}
    )
    report = verify_action(action, budget)
    assert not report.passed
    failures = [c for c in report.failures if c.kind is CheckKind.COMPATIBILITY]
    assert failures
    assert failures[0].witness.startswith("f = ")


def test_noncommutative_commutator_is_checked(budget):
    action = example_noncommutative(2, 2, budget=budget)
    report = verify_action(action, budget)
    subjects = [c.subject for c in report.of_kind(CheckKind.RELATION)]
    assert "[U2, U1] = declared value" in subjects
    assert all(c.subject != "[U1, U2] = 0" for c in report.of_kind(CheckKind.COMMUTATION))
    with pytest.raises(NotSupported):
        is_faithful(action)


def test_generic_freeness_counts_variables(field_x2):
    action = height_one_action(field_x2, YoungDiagram((1,)))
    assert is_generically_free(action)
    group = HeightOne(2, YoungDiagram((1, 1)))
    dx = DiffOp.partial(field_x2, "x")
    doubled = ModuleAlgebraAction(field_x2, group, dual(group), {"U1": dx, "U2": dx})
    assert not is_generically_free(doubled)
    assert not is_faithful(doubled)


def test_trivial_group_is_free(field_x2):
    group = HeightOne(2, None)
    action = ModuleAlgebraAction(field_x2, group, dual(group), {})
    assert is_generically_free(action)
    assert verify_action(action).test_level == 0


def test_rational_coefficient_breaks_the_product_rule(budget):
    action = example_ptorsion(2, 2, budget=budget)
    t = action.field.variable("t")
    assignment = dict(action.assignment)
    assignment["T2"] = assignment["T2"].scale(action.field.one / (t + 1))
    scaled = ModuleAlgebraAction(action.field, action.group, action.dual, assignment)
    report = verify_action(scaled, budget)
    failed = {c.subject for c in report.failures if c.kind is CheckKind.COMPATIBILITY}
    assert "T2 (monomials up to (2,))" in failed
    assert any(subject.startswith("T2 (") and "random pairs" in subject for subject in failed)


def test_random_pair_count_shrinks_with_variables_and_lift():
    settings = BudgetSettings()
    assert random_pair_count(settings, 1, 2) == 50
    assert random_pair_count(settings, 3, 4) == 8
    assert random_pair_count(settings, 3, 27) == VERIFY_MIN_RANDOM_PAIRS
    assert random_pair_count(BudgetSettings(random_pairs=2), 1, 2) == 2


@pytest.mark.slow
def test_verification_over_three_variables_stays_within_a_minute():
    K = function_field(2, ("x", "y", "z"))
    action = build_action(KerFMinusV(2, 2), K)
    start = time.perf_counter()
    report = verify_action(action)
    elapsed = time.perf_counter() - start
    assert report.passed
    assert elapsed < 60
