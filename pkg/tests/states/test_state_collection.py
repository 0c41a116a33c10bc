"""
Test suite for src/states/state_collection.py
"""

import json

import pytest

from src.actions.action import ModuleAlgebraAction
from src.actions.examples import (
    example_counterexample_surface,
    example_ptorsion,
    noncommutative_group,
)
from src.actions.verification import verify_action
from src.diffop.operator import DiffOp
from src.diffop.parser import format_operator
from src.field.parser import format_rational
from src.field.rational_function import function_field
from src.groupscheme.descriptor import (
    Explicit,
    HeightOne,
    KerF2MinusV,
    KerFMinusV,
    Product,
    dual,
    invariants,
)
from src.groupscheme.young import YoungDiagram
from src.solver.system import solve_system
from src.states.state_collection import (
    ActionFile,
    GroupInfo,
    KerFVSpec,
    SolveResultModel,
    SystemFile,
    SystemRecord,
    VerificationReportModel,
    descriptor_to_group_spec,
    group_spec_to_descriptor,
    parse_group_spec,
)
from src.utils.constants import VerificationState
from src.utils.errors import MalformedInputError, ParseError

# ============================================================================
# Group specs
# ============================================================================


@pytest.mark.parametrize(
    "text, expected",
    [
        (
            '{"type": "young", "p": 2, "rows": [3, 1], "mu": 1}',
            HeightOne(2, YoungDiagram((3, 1)), 1),
        ),
        ('{"type": "young", "p": 3}', HeightOne(3, None, 0)),
        ('{"type": "kerFV", "p": 2, "n": 2}', KerFMinusV(2, 2)),
        ('{"type": "kerF2V", "p": 5}', KerF2MinusV(5)),
    ],
)
def test_parse_group_spec(text, expected):
    assert group_spec_to_descriptor(parse_group_spec(text)) == expected


def test_parse_product_spec():
    text = json.dumps(
        {
            "type": "product",
            "p": 2,
            "factors": [
                {"type": "kerFV", "p": 2, "n": 1},
                {"type": "young", "p": 2, "rows": [1]},
            ],
        }
    )
    desc = group_spec_to_descriptor(parse_group_spec(text))
    assert desc == Product(2, (KerFMinusV(2, 1), HeightOne(2, YoungDiagram((1,)))))


@pytest.mark.parametrize(
    "text",
    [
        '{"type": "young", "p": 4}',
        '{"type": "young", "p": 2, "rows": [1, 2]}',
        '{"type": "young", "p": 2, "mu": -1}',
        '{"type": "kerFV", "p": 2, "n": 0}',
        '{"type": "torus", "p": 2}',
        '{"type": "explicit", "p": 2}',
        '{"type": "product", "p": 2, "factors": [{"type": "kerF2V", "p": 3}]}',
        '{"type": "product", "p": 2, "factors": []}',
    ],
)
def test_invalid_group_specs(text):
    with pytest.raises(MalformedInputError):
        parse_group_spec(text)


def test_json_syntax_error_has_location():
    with pytest.raises(ParseError) as info:
        parse_group_spec('{"type": "young",\n  "p": }', "group.json")
    assert info.value.line == 2
    assert info.value.source == "group.json"


def test_explicit_spec_round_trip():
    group = noncommutative_group(2, 2)
    spec = descriptor_to_group_spec(group)
    assert spec.type == "explicit"
    rebuilt = group_spec_to_descriptor(parse_group_spec(spec.model_dump_json()))
    assert isinstance(rebuilt, Explicit)
    assert dual(rebuilt).names == ("U0", "U1", "U2")
    assert not dual(rebuilt).commutative
    assert invariants(rebuilt).frobenius_height == 3


# ============================================================================
# Action files
# ============================================================================


def test_action_file_round_trip(tmp_path, budget):
    action = example_ptorsion(2, 2, budget=budget)
    path = tmp_path / "actions" / "ptorsion.json"
    ActionFile.from_action(action).save_json(str(path))

    loaded = ActionFile.load_json(str(path))
    assert loaded.group == KerFVSpec(p=2, n=2)
    assert loaded.assignment["T1"] == "1 * d[t]^[1]"
    rebuilt = loaded.to_action(budget)
    assert rebuilt.assignment == action.assignment
    assert rebuilt.group == KerFMinusV(2, 2)


def test_action_file_keeps_explicit_groups(budget):
    action = example_counterexample_surface(2, budget=budget)
    marked = action.with_report(verify_action(action, budget))
    text = ActionFile.from_action(marked).to_json()
    rebuilt = ActionFile.from_text(text).to_action(budget)
    assert rebuilt.verified is VerificationState.PASSED
    assert rebuilt.dual.names == ("T0", "U0", "T1", "U1")
    assert rebuilt.assignment == action.assignment


def test_action_file_validation(tmp_path):
    group = {"type": "kerFV", "p": 3, "n": 1}
    text = json.dumps({"p": 2, "variables": ["t"], "group": group, "assignment": {}})
    with pytest.raises(MalformedInputError, match="group has p"):
        ActionFile.from_text(text)
    with pytest.raises(MalformedInputError, match="not found"):
        ActionFile.load_json(str(tmp_path / "missing.json"))

    group["p"] = 2
    bad = json.dumps({"p": 2, "variables": ["t"], "group": group, "assignment": {"T1": "d[t"}})
    with pytest.raises(ParseError):
        ActionFile.from_text(bad).to_action()


# ============================================================================
# Systems and reports
# ============================================================================


def _system_file(perturb=False):
    K = function_field(2, ("x", "y"))
    x, y = K.variable("x"), K.variable("y")
    d1 = DiffOp.partial(K, "x") + DiffOp.partial(K, "y").scale(x)
    d2 = DiffOp.partial(K, "y")
    # rhs of z = x^3 y
    a1 = x * x * y + x**4
    a2 = x**3 + (y if perturb else K.zero)
    return SystemFile(
        p=2,
        variables=["x", "y"],
        equations=[
            SystemRecord(operator=format_operator(d1), rhs=format_rational(a1), reduction="X2"),
            SystemRecord(operator=format_operator(d2), rhs=format_rational(a2)),
        ],
    )


def test_system_file_to_system():
    system = _system_file().to_system()
    assert system.reductions == ({(0, 1): 1}, {})
    assert system.order_exponents == (1, 1)
    assert system.reductions_hold()

    x = solve_system(system)
    result = SolveResultModel.solved(system, x)
    assert result.status == "solved"
    assert all(check.passed for check in result.checks)


def test_system_file_round_trip(tmp_path):
    path = tmp_path / "system.json"
    _system_file(perturb=True).save_json(str(path))
    loaded = SystemFile.load_json(str(path))
    assert loaded == _system_file(perturb=True)
    assert loaded.level is None


def test_verification_report_model(budget):
    action = example_counterexample_surface(2, budget=budget)
    assignment = dict(action.assignment)
    assignment["T1"] = DiffOp.partial(action.field, "x", 2)
    corrupted = ModuleAlgebraAction(action.field, action.group, action.dual, assignment)
    model = VerificationReportModel.from_report(verify_action(corrupted, budget))
    assert model.status == "fail"
    lines = model.summary_lines()
    assert lines[0] == "status: fail"
    assert any(line.startswith("FAILED relation: T1^2 = relation") for line in lines)


def test_group_info():
    info = GroupInfo.from_descriptor(KerFMinusV(2, 2))
    assert info.lie_dim == 1
    assert info.socle == "alpha_p"
    assert info.order == "p^2"
    assert "lie_dim: 1" in info.summary_lines()
    assert "  T2^2 = T1" in info.summary_lines()

    noncommutative = GroupInfo.from_descriptor(noncommutative_group(2, 2))
    assert noncommutative.socle is None
    assert "socle: n/a" in noncommutative.summary_lines()
