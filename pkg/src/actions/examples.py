"""
Named example actions on curves and surfaces.

- example_ptorsion: ker(F^n - V) on Witt vectors acting on F_p(t), built by repeated
  extension from d_t
- example_answerbrion: ker(F^2 - V), a group with one-dimensional Lie algebra that is
  not a subgroup of a one-dimensional algebraic group, acting on F_p(t)
- example_noncommutative: a non-commutative group with one-dimensional Lie algebra
  acting generically freely on F_p(t)
- example_counterexample_surface: an autodual subgroup of W_2 x W_2 with no faithful
  action on curves, acting on F_p(x, y)
"""

from __future__ import annotations

from typing import Optional

from src.actions.action import ModuleAlgebraAction
from src.actions.construction import extend_action, height_one_action
from src.diffop.binomial import lucas_binomial
from src.diffop.operator import DiffOp, sum_operators
from src.field.rational_function import FunctionField, function_field
from src.groupscheme.descriptor import Explicit, KerF2MinusV, KerFMinusV
from src.groupscheme.presentation import (
    HopfGenerator,
    HopfPresentation,
    generator_polynomial,
    monomial,
    single,
)
from src.groupscheme.witt import witt_sum_polynomials, witt_tail
from src.groupscheme.young import YoungDiagram
from src.utils.errors import InvalidDescriptor, InvalidVariables
from src.utils.logging import log_process_end, log_process_start
from src.utils.settings import BudgetSettings, resolve


def _curve(p: int, var: str, budget: Optional[BudgetSettings]) -> FunctionField:
    if not var.isidentifier():
        raise InvalidVariables(f"{var!r} is not an identifier")
    return function_field(p, (var,), budget)


def example_ptorsion(
    p: int, n: int, var: str = "t", budget: Optional[BudgetSettings] = None
) -> ModuleAlgebraAction:
    """
    An action of KerFMinusV(p, n) on F_p(var), extended one level at a time from d_t.

    Raises:
        InvalidDescriptor: If n < 1.
        HeightBudgetExceeded: If n exceeds the height budget.
    """
    if n < 1:
        raise InvalidDescriptor("example_ptorsion needs n >= 1")
    settings = resolve(budget)
    field = _curve(p, var, settings)
    log_process_start(f"example_ptorsion (p={p}, n={n})")
    action = height_one_action(field, YoungDiagram((1,)), budget=settings)
    for i in range(1, n + 1):
        action = extend_action(action, KerFMinusV(p, i), settings)
    log_process_end(f"example_ptorsion (p={p}, n={n})")
    return action


def example_answerbrion(
    p: int, var: str = "t", budget: Optional[BudgetSettings] = None
) -> ModuleAlgebraAction:
    """An action of KerF2MinusV(p) on F_p(var), extended from d_t."""
    settings = resolve(budget)
    field = _curve(p, var, settings)
    base = height_one_action(field, YoungDiagram((1,)), budget=settings)
    return extend_action(base, KerF2MinusV(p), settings)


def noncommutative_group(p: int, n: int, budget: Optional[BudgetSettings] = None) -> Explicit:
    """
    The group k[T_0, T_1]/(T_0^(p^n), T_1^p - T_0) with
    Delta(T_1) = T_1 (x) 1 + 1 (x) T_1 + T_0^(p^(n-1)) (x) T_0^(p^(n-2)).

    Its dual has the basis dual to the monomials T_1^m. It is generated by U_0, ..., U_n
    (U_i dual to T_1^(p^i)) with Witt comultiplication, U_i^p = 0 for i < n,
    U_n^p = U_0^(p-1) U_(n-1) and the single non-trivial commutator [U_n, U_(n-1)] = U_0.

    Raises:
        InvalidDescriptor: If n < 2.
        HeightBudgetExceeded: If n + 1 exceeds the height budget.
    """
    if n < 2:
        raise InvalidDescriptor("the non-commutative family needs n >= 2")
    group_side = HopfPresentation(
        p,
        (
            HopfGenerator(name="T0", level=1, p_exponent=n),
            HopfGenerator(
                name="T1",
                level=2,
                relation_tail=single("T0"),
                comul_tail=((1, (("T0", p ** (n - 1)),), (("T0", p ** (n - 2)),)),),
            ),
        ),
        commutative=True,
    )
    names = [f"U{i}" for i in range(n + 1)]
    data = witt_sum_polynomials(p, n + 1, budget)
    top_relation = generator_polynomial(
        ((1, monomial((names[0], p - 1), (names[n - 1], 1))),), p
    )
    dual_side = HopfPresentation(
        p,
        tuple(
            HopfGenerator(
                name=name,
                level=i + 1,
                relation_tail=top_relation if i == n else (),
                comul_tail=witt_tail(data, i, names),
                verschiebung=single(names[i - 1]) if i else (),
            )
            for i, name in enumerate(names)
        ),
        commutative=False,
        extra_commutators=((names[n], names[n - 1], single(names[0])),),
    )
    return Explicit(
        p,
        presentation=group_side,
        dual_presentation=dual_side,
        name=f"noncommutative(n={n})",
    )


def _coaction_operator(field: FunctionField, var: str, n: int, i: int) -> DiffOp:
    """
    The coefficient of T_1^(p^i) in f(t + T_1 + t^(p^n) T_1^(p^(n-1))).

    Expanding the shift s = T_1 + t^(p^n) T_1^(p^(n-1)) by Taylor, s^m contributes
    binom(m, j) t^(j p^n) d^[m] whenever m + j (p^(n-1) - 1) = p^i.
    """
    p = field.p
    t = field.variable(var)
    target = p**i
    step = p ** (n - 1) - 1
    terms = []
    for j in range(p + 1):
        m = target - j * step
        if m < max(j, 1):
            break
        coeff = lucas_binomial(m, j, p)
        if coeff:
            terms.append(DiffOp.partial(field, var, m).scale(t ** (j * p**n) * coeff))
    return sum_operators(field, terms)


def example_noncommutative(
    p: int, n: int, var: str = "t", budget: Optional[BudgetSettings] = None
) -> ModuleAlgebraAction:
    """
    The action of noncommutative_group(p, n) on F_p(var) given by the coaction
    t -> t + T_1 + t^(p^n) T_1^(p^(n-1)), the group law of T_1 applied with t in the
    first slot.

    D_i = d^[p^i] for i < n - 1, D_(n-1) = d^[p^(n-1)] + t^(p^n) d and
    D_n = d^[p^n] + sum_(j=1..p) t^(j p^n) d^[p^n - j (p^(n-1) - 1)].
    """
    settings = resolve(budget)
    group = noncommutative_group(p, n, settings)
    field = _curve(p, var, settings)
    assignment = {f"U{i}": _coaction_operator(field, var, n, i) for i in range(n + 1)}
    return ModuleAlgebraAction(field, group, group.dual_presentation, assignment)


def counterexample_group(p: int, budget: Optional[BudgetSettings] = None) -> Explicit:
    """
    The autodual subgroup k[T_0, T_1, U_0, U_1]/(T_0^p, U_0^p, T_1^p - U_0, U_1^p - T_0)
    of W_2 x W_2.
    """
    data = witt_sum_polynomials(p, 2, budget)
    presentation = HopfPresentation(
        p,
        (
            HopfGenerator(name="T0", level=1),
            HopfGenerator(name="U0", level=1),
            HopfGenerator(
                name="T1",
                level=2,
                relation_tail=single("U0"),
                comul_tail=witt_tail(data, 1, ["T0", "T1"]),
                verschiebung=single("T0"),
            ),
            HopfGenerator(
                name="U1",
                level=2,
                relation_tail=single("T0"),
                comul_tail=witt_tail(data, 1, ["U0", "U1"]),
                verschiebung=single("U0"),
            ),
        ),
    )
    return Explicit(p, presentation=presentation, autodual=True, name="counterexample")


def example_counterexample_surface(
    p: int, variables: tuple[str, str] = ("x", "y"), budget: Optional[BudgetSettings] = None
) -> ModuleAlgebraAction:
    """
    T_0 -> d_x, U_0 -> d_y, T_1 -> d^[p]_x - x^(p(p-1)) d_y, U_1 -> d^[p]_y - y^(p(p-1)) d_x.
    """
    settings = resolve(budget)
    if len(variables) != 2:
        raise InvalidVariables("the counterexample acts on a surface")
    field = function_field(p, variables, settings)
    x, y = variables
    group = counterexample_group(p, settings)
    exponent = p * (p - 1)
    assignment = {
        "T0": DiffOp.partial(field, x),
        "U0": DiffOp.partial(field, y),
        "T1": DiffOp.partial(field, x, p)
        - DiffOp.partial(field, y).scale(field.variable(x) ** exponent),
        "U1": DiffOp.partial(field, y, p)
        - DiffOp.partial(field, x).scale(field.variable(y) ** exponent),
    }
    return ModuleAlgebraAction(field, group, group.presentation, assignment)
