"""
Command line surface.

Subcommands:
- info --group G: invariants, socle, minimal dimension and necessary conditions
- socle --group G: the socle of a commutative group
- build --group G --vars x,y: a generically free action on F_p(vars)
- extend --action A --group G: extend an action of ker F^r to G
- verify --action A: run every check and report
- solve --system S: solve a system of differential equations
- join --actions A1,A2: greedy join of height-one actions
- young-join --diagrams 3,1 2,2: row-wise maximum of Young diagrams

Group arguments are inline JSON or a path; action and system arguments are paths.
Human-readable summaries go to stdout; --machine prints JSON instead, and --output
writes the JSON result to a file. Exit codes: 0 success, 1 mathematically infeasible
(or a failed verification), 2 malformed input or exceeded budget.
"""

from __future__ import annotations

import argparse
from typing import Callable, Optional, Sequence

from pydantic import ValidationError

from src.actions.action import ModuleAlgebraAction
from src.actions.construction import build_action, extend_action, join_greedy
from src.actions.verification import verify_action
from src.diffop.parser import format_operator
from src.field.rational_function import function_field
from src.groupscheme.young import YoungDiagram
from src.solver.system import solve_system
from src.states.state_collection import (
    ActionFile,
    GroupInfo,
    JsonFileModel,
    SocleResult,
    SolveResultModel,
    SystemFile,
    VerificationReportModel,
    YoungJoinResult,
    group_spec_to_descriptor,
    parse_group_spec,
)
from src.utils.constants import EXIT_INFEASIBLE, EXIT_MALFORMED, EXIT_SUCCESS, LOG_LEVEL
from src.utils.errors import ActionsError, Incompatible, exit_code_for
from src.utils.logging import (
    log_error,
    log_process_end,
    log_process_start,
    setup_logging,
)
from src.utils.settings import BudgetSettings, get_settings
from src.utils.utils import load_text_argument, split_names

Handler = Callable[[argparse.Namespace, BudgetSettings], int]


# ============================================================================
# Output
# ============================================================================


def _emit(args: argparse.Namespace, model: JsonFileModel, lines: Sequence[str]) -> None:
    if args.output:
        model.save_json(args.output)
    print(model.to_json() if args.machine else "\n".join(lines))


def _action_lines(action: ModuleAlgebraAction) -> list[str]:
    lines = [f"p: {action.p}", f"variables: {', '.join(action.variables)}"]
    lines.extend(f"{name} -> {format_operator(op)}" for name, op in action.assignment.items())
    return lines


def _emit_action(args: argparse.Namespace, action: ModuleAlgebraAction) -> int:
    _emit(args, ActionFile.from_action(action), _action_lines(action))
    return EXIT_SUCCESS


def _group(args: argparse.Namespace):
    return group_spec_to_descriptor(parse_group_spec(load_text_argument(args.group), args.group))


# ============================================================================
# Handlers
# ============================================================================


def _info(args: argparse.Namespace, budget: BudgetSettings) -> int:
    info = GroupInfo.from_descriptor(_group(args), budget)
    _emit(args, info, info.summary_lines())
    return EXIT_SUCCESS


def _socle(args: argparse.Namespace, budget: BudgetSettings) -> int:
    result = SocleResult.from_descriptor(_group(args))
    _emit(args, result, result.summary_lines())
    return EXIT_SUCCESS


def _build(args: argparse.Namespace, budget: BudgetSettings) -> int:
    group = _group(args)
    field = function_field(group.p, tuple(split_names(args.vars)), budget)
    return _emit_action(args, build_action(group, field, budget))


def _extend(args: argparse.Namespace, budget: BudgetSettings) -> int:
    base = ActionFile.load_json(args.action).to_action(budget)
    return _emit_action(args, extend_action(base, _group(args), budget))


def _verify(args: argparse.Namespace, budget: BudgetSettings) -> int:
    action = ActionFile.load_json(args.action).to_action(budget)
    report = verify_action(action, budget)
    model = VerificationReportModel.from_report(report)
    _emit(args, model, model.summary_lines())
    return EXIT_SUCCESS if report.passed else EXIT_INFEASIBLE


def _solve(args: argparse.Namespace, budget: BudgetSettings) -> int:
    spec = SystemFile.load_json(args.system)
    system = spec.to_system(budget)
    try:
        x = solve_system(system, spec.level, budget)
    except Incompatible as e:
        model = SolveResultModel(status="incompatible")
        _emit(args, model, [f"status: incompatible ({e})"])
        return EXIT_INFEASIBLE
    model = SolveResultModel.solved(system, x)
    _emit(args, model, ["status: solved", f"x = {model.solution}"])
    return EXIT_SUCCESS


def _join(args: argparse.Namespace, budget: BudgetSettings) -> int:
    actions = [ActionFile.load_json(path).to_action(budget) for path in split_names(args.actions)]
    return _emit_action(args, join_greedy(actions, budget))


def _young_join(args: argparse.Namespace, budget: BudgetSettings) -> int:
    result = YoungJoinResult.from_diagrams([YoungDiagram.parse(text) for text in args.diagrams])
    _emit(args, result, result.summary_lines())
    return EXIT_SUCCESS


# ============================================================================
# Parser
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infact",
        description="Rational actions of infinitesimal group schemes on F_p(x_1, ..., x_n).",
    )
    parser.add_argument("--machine", action="store_true", help="print JSON instead of text")
    parser.add_argument("--output", default=None, help="also write the JSON result here")
    parser.add_argument("--budget-height", type=int, default=None, help="height budget H")
    parser.add_argument("--budget-p", type=int, default=None, help="largest accepted prime")
    parser.add_argument("--log-level", default=LOG_LEVEL, help="logging level")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Handler, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    command("info", _info, "group invariants").add_argument("--group", required=True)
    command("socle", _socle, "socle of a commutative group").add_argument(
        "--group", required=True
    )
    build = command("build", _build, "build a generically free action")
    build.add_argument("--group", required=True)
    build.add_argument("--vars", required=True, help="comma separated variable names")
    extend = command("extend", _extend, "extend an action of ker F^r")
    extend.add_argument("--action", required=True)
    extend.add_argument("--group", required=True)
    command("verify", _verify, "verify an action file").add_argument("--action", required=True)
    command("solve", _solve, "solve a system file").add_argument("--system", required=True)
    command("join", _join, "join height-one actions").add_argument(
        "--actions", required=True, help="comma separated action files"
    )
    command("young-join", _young_join, "join Young diagrams").add_argument(
        "--diagrams", nargs="+", required=True
    )
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run one subcommand and return its exit code.

    Library errors are logged and mapped through exit_code_for.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_SUCCESS if e.code == 0 else EXIT_MALFORMED
    setup_logging(args.log_level.upper())
    try:
        budget = get_settings().with_overrides(
            max_prime=args.budget_p, height_budget=args.budget_height
        )
    except ValidationError as e:
        log_error(f"Invalid budget: {e.errors()[0]['msg']}")
        return EXIT_MALFORMED
    log_process_start(f"infact {args.command}")
    try:
        code = args.handler(args, budget)
    except ActionsError as e:
        log_error(f"{type(e).__name__}: {e}")
        log_process_end(f"infact {args.command}", success=False)
        return exit_code_for(e)
    log_process_end(f"infact {args.command}", success=code == EXIT_SUCCESS)
    return code
