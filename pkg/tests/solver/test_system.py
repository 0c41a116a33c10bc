"""
Test suite for src/solver/system.py

Single equations over K^(p^r), compatibility of systems, the stacked solver against the
per-equation recursion, and the image/kernel structure of D = d_x over F_3(x).
"""

import random

import pytest

from src.actions.construction import canonical_block_derivation
from src.diffop.operator import DiffOp, apply, power
from src.field.rational_function import function_field, random_rational_function
from src.solver.system import (
    DiffSystem,
    check_compatibility,
    kernel_basis,
    operator_rank,
    solve_single,
    solve_system,
    solve_system_by_recursion,
)
from src.utils.errors import Incompatible, InvalidSystem, NoSolution, OrderTooHighForLevel

K3 = function_field(3, ("x",))
K2 = function_field(2, ("x", "y"))


def _commuting_pair():
    """D1 = d_x + x d_y and D2 = d_y, with D1^2 = D2 and D2^2 = 0."""
    x = K2.variable("x")
    d1 = DiffOp.partial(K2, "x") + DiffOp.partial(K2, "y").scale(x)
    d2 = DiffOp.partial(K2, "y")
    return d1, d2


def _system_from(z, perturbation=None):
    d1, d2 = _commuting_pair()
    a1 = apply(d1, z)
    if perturbation is not None:
        a1 = a1 + perturbation
    return DiffSystem(
        K2,
        (d1, d2),
        (a1, apply(d2, z)),
        (1, 1),
        ({(0, 1): 1}, {}),
    )


def test_one_preimage_for_dx_over_f3():
    d = DiffOp.partial(K3, "x")
    assert operator_rank(d, 1) == 2
    assert len(kernel_basis([d], 1)) == 1
    t = solve_single(d, K3.one, 1)
    assert apply(d, t) == K3.one


@pytest.mark.parametrize("i", [1, 2])
def test_image_equals_kernel_for_dx_over_f3(i):
    d = DiffOp.partial(K3, "x")
    image_op = power(d, i)
    kernel = kernel_basis([power(d, 3 - i)], 1)
    assert operator_rank(image_op, 1) == len(kernel)
    for k in kernel:
        assert apply(image_op, solve_single(image_op, k, 1)) == k


@pytest.mark.parametrize(
    "p, i",
    [(2, 1), (2, 2), (2, 3)]
    + [pytest.param(3, i, marks=pytest.mark.slow) for i in (1, 4, 8)],
)
def test_image_equals_kernel_for_a_canonical_block(p, i):
    field = function_field(p, ("x", "y"))
    d = canonical_block_derivation(field, ("x", "y"))
    order = p**2
    image_rank = operator_rank(power(d, i), 2)
    # K is free of rank p^2 over K^D[D]
    assert image_rank == order * (order - i)
    assert image_rank == len(kernel_basis([power(d, order - i)], 2))


def test_solve_single_with_constraints():
    x, y = K2.variable("x"), K2.variable("y")
    dx, dy = DiffOp.partial(K2, "x"), DiffOp.partial(K2, "y")
    t = solve_single(dy, x * x + K2.one, 1, constraints=[dx])
    assert apply(dy, t) == x * x + K2.one
    assert apply(dx, t).is_zero
    with pytest.raises(NoSolution):
        solve_single(dx, x, 1)
    with pytest.raises(NoSolution):
        solve_single(dy, y, 1, constraints=[dx])



def test_solve_single_checks_the_level():
    with pytest.raises(OrderTooHighForLevel):
        solve_single(DiffOp.partial(K3, "x", 3), K3.one, 1)


def test_compatible_system_is_solved():
    x, y = K2.variable("x"), K2.variable("y")
    z = x**3 * y / (x + y + 1)
    system = _system_from(z)
    assert system.reductions_hold()
    assert check_compatibility(system)
    solution = solve_system(system)
    for op in system.operators:
        assert apply(op, solution - z).is_zero


def test_perturbed_system_is_rejected():
    x, y = K2.variable("x"), K2.variable("y")
    system = _system_from(x * y, perturbation=y)
    assert not check_compatibility(system)
    with pytest.raises(Incompatible):
        solve_system(system)
    with pytest.raises(Incompatible):
        solve_system_by_recursion(system)


def test_empty_system():
    system = DiffSystem(K2, (), (), (), ())
    assert solve_system(system).is_zero


def test_invalid_systems():
    d1, d2 = _commuting_pair()
    with pytest.raises(InvalidSystem):
        DiffSystem(K2, (d1,), (), (1,))
    with pytest.raises(InvalidSystem):
        DiffSystem(K2, (d1,), (K2.zero,), (1,), ({(0,): 1},))
    with pytest.raises(InvalidSystem):
        DiffSystem(K2, (d1,), (K2.zero,), (0,))
    x = K2.variable("x")
    system = DiffSystem(
        K2, (DiffOp.partial(K2, "x"), d2.scale(x)), (K2.zero, K2.zero), (1, 1)
    )
    with pytest.raises(InvalidSystem):
        system.assert_commuting()


@pytest.mark.slow
def test_random_systems_round_trip():
    """Systems seeded from a known z are solvable; perturbed ones are not."""
    rng = random.Random(2024)
    y = K2.variable("y")
    for _ in range(100):
        z = random_rational_function(K2, rng)
        system = _system_from(z)
        assert check_compatibility(system)
        solution = solve_system(system)
        assert all(apply(op, solution - z).is_zero for op in system.operators)
        assert not check_compatibility(_system_from(z, perturbation=y))


@pytest.mark.slow
def test_stacked_solver_agrees_with_recursion():
    rng = random.Random(99)
    for _ in range(25):
        z = random_rational_function(K2, rng)
        system = _system_from(z)
        stacked = solve_system(system)
        recursive = solve_system_by_recursion(system)
        assert all(apply(op, stacked - recursive).is_zero for op in system.operators)
