"""
Test suite for src/cli/commands.py

Each test runs one subcommand through run() and checks the exit code and stdout.
"""

import json

import pytest

from src.cli.commands import run
from src.diffop.operator import DiffOp
from src.diffop.parser import format_operator
from src.field.parser import format_rational
from src.field.rational_function import function_field
from src.states.state_collection import ActionFile, SystemFile, SystemRecord

KERFV_2 = '{"type": "kerFV", "p": 2, "n": 2}'


def _young(p, rows):
    return json.dumps({"type": "young", "p": p, "rows": rows})


@pytest.fixture
def ptorsion_file(tmp_path, capsys):
    path = tmp_path / "ptorsion.json"
    code = run(["--output", str(path), "build", "--group", KERFV_2, "--vars", "t"])
    capsys.readouterr()
    assert code == 0
    return path


def test_info(capsys):
    assert run(["--machine", "info", "--group", KERFV_2]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["lie_dim"] == 1
    assert data["socle"] == "alpha_p"


def test_info_summary(capsys):
    assert run(["info", "--group", _young(2, [3, 1])]) == 0
    out = capsys.readouterr().out
    assert "lie_dim: 4" in out
    assert "dimension 2: necessary condition fails" in out
    assert "dimension 3: necessary condition holds" in out


def test_socle(capsys):
    assert run(["socle", "--group", _young(3, [2, 1])]) == 0
    assert capsys.readouterr().out.strip() == "alpha_p^2"


def test_young_join(capsys):
    assert run(["young-join", "--diagrams", "3,1", "2,2"]) == 0
    assert capsys.readouterr().out.strip() == "3,2"


def test_build_prints_operators(capsys):
    assert run(["build", "--group", _young(2, [2]), "--vars", "x,y"]) == 0
    out = capsys.readouterr().out
    assert "variables: x, y" in out
    assert "U1 -> 1 * d[x]^[1] + (x) * d[y]^[1]" in out


def test_build_infeasible_and_malformed(capsys):
    assert run(["build", "--group", _young(2, [3, 2]), "--vars", "a,b,c,d"]) == 1
    assert run(["build", "--group", '{"type": "young", "p": 4}', "--vars", "x"]) == 2
    assert run(["build", "--group", "missing.json", "--vars", "x"]) == 2
    assert run(["frobnicate"]) == 2


def test_budget_flags(capsys):
    group = _young(11, [1])
    assert run(["build", "--group", group, "--vars", "x"]) == 2
    assert run(["--budget-p", "11", "build", "--group", group, "--vars", "x"]) == 0
    assert run(["--budget-p", "1", "info", "--group", KERFV_2]) == 2


def test_verify(ptorsion_file, capsys):
    assert run(["--machine", "verify", "--action", str(ptorsion_file)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "pass"
    assert report["generically_free"] is True


def test_verify_corrupted_action(ptorsion_file, capsys):
    action = ActionFile.load_json(str(ptorsion_file))
    action.assignment["T2"] = "1 * d[t]^[2]"
    action.save_json(str(ptorsion_file))
    assert run(["verify", "--action", str(ptorsion_file)]) == 1
    out = capsys.readouterr().out
    assert "status: fail" in out
    assert "FAILED relation: T2^2 = relation" in out


def test_extend(tmp_path, capsys):
    base = tmp_path / "base.json"
    assert run(["--output", str(base), "build", "--group", _young(2, [1]), "--vars", "t"]) == 0
    capsys.readouterr()
    assert run(["--machine", "extend", "--action", str(base), "--group", KERFV_2]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["assignment"]["T2"] == "1 * d[t]^[2] + (t^2) * d[t]^[1]"


def test_join(tmp_path, capsys):
    path = tmp_path / "a.json"
    assert run(["--output", str(path), "build", "--group", _young(2, [1]), "--vars", "x,y"]) == 0
    capsys.readouterr()
    assert run(["--machine", "join", "--actions", f"{path},{path}"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["group"]["rows"] == [1]


def _write_system(path, perturb):
    K = function_field(2, ("x", "y"))
    x, y = K.variable("x"), K.variable("y")
    d1 = DiffOp.partial(K, "x") + DiffOp.partial(K, "y").scale(x)
    a2 = x**3 + (y if perturb else K.zero)
    SystemFile(
        p=2,
        variables=["x", "y"],
        equations=[
            SystemRecord(
                operator=format_operator(d1),
                rhs=format_rational(x * x * y + x**4),
                reduction="X2",
            ),
            SystemRecord(operator=format_operator(DiffOp.partial(K, "y")), rhs=format_rational(a2)),
        ],
    ).save_json(str(path))


def test_solve(tmp_path, capsys):
    path = tmp_path / "system.json"
    _write_system(path, perturb=False)
    assert run(["solve", "--system", str(path)]) == 0
    assert "status: solved" in capsys.readouterr().out

    _write_system(path, perturb=True)
    output = tmp_path / "result.json"
    assert run(["--output", str(output), "solve", "--system", str(path)]) == 1
    assert json.loads(output.read_text())["status"] == "incompatible"


def test_help_lists_every_command(capsys):
    assert run(["--help"]) == 0
    out = capsys.readouterr().out
    for name in ("info", "socle", "build", "extend", "verify", "solve", "join", "young-join"):
        assert name in out


def test_socle_machine_output(tmp_path, capsys):
    path = tmp_path / "socle.json"
    assert run(["--machine", "--output", str(path), "socle", "--group", _young(3, [2, 1])]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["socle"] == "alpha_p^2"
    assert data["alpha_rank"] == 2
    assert data["mu_count"] == 0
    assert json.loads(path.read_text()) == data


def test_young_join_machine_output(tmp_path, capsys):
    path = tmp_path / "join.json"
    assert run(["--machine", "--output", str(path), "young-join", "--diagrams", "3,1", "2,2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {"diagrams": [[3, 1], [2, 2]], "join": [3, 2]}
    assert json.loads(path.read_text()) == data


SMALL_GROUPS = [
    ({"type": "young", "rows": [1]}, "x"),
    ({"type": "young", "rows": [1], "mu": 1}, "x,y"),
    ({"type": "young", "rows": [2]}, "x,y"),
    ({"type": "young", "rows": [1, 1]}, "x,y"),
    ({"type": "young", "rows": [3]}, "x,y,z"),
    ({"type": "young", "rows": [2, 1]}, "x,y,z"),
    ({"type": "young", "rows": [1, 1, 1]}, "x,y,z"),
    ({"type": "kerFV", "n": 2}, "t"),
    ({"type": "kerFV", "n": 3}, "t"),
    ({"type": "kerF2V"}, "t"),
]


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("spec,variables", SMALL_GROUPS)
def test_build_then_verify_round_trip(tmp_path, capsys, p, spec, variables):
    group = json.dumps({**spec, "p": p})
    path = tmp_path / "action.json"
    assert run(["--output", str(path), "build", "--group", group, "--vars", variables]) == 0
    assert path.read_text() == ActionFile.load_json(str(path)).to_json() + "\n"
    capsys.readouterr()
    assert run(["--machine", "verify", "--action", str(path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "pass"
    assert report["generically_free"] is True


def test_output_is_byte_identical_across_runs(tmp_path, capsys):
    outputs = []
    for name in ("first.json", "second.json"):
        path = tmp_path / name
        command = ["--machine", "--output", str(path), "build", "--group", KERFV_2, "--vars", "t"]
        assert run(command) == 0
        outputs.append((capsys.readouterr().out, path.read_bytes()))
    assert outputs[0] == outputs[1]

    reports = []
    for _ in range(2):
        assert run(["--machine", "verify", "--action", str(tmp_path / "first.json")]) == 0
        reports.append(capsys.readouterr().out)
    assert reports[0] == reports[1]
