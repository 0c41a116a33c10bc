"""
Constructions of module-algebra actions on K = F_p(x_1, ..., x_n).

- canonical_block_derivation: sum (x_1 ... x_(i-1))^(p-1) d_i, a derivation of order
  p^s on s variables
- height_one_action: one canonical block per row of the Young diagram, y d_y per mu_p
- extend_action: the level-by-level extension from ker F^r to the whole group
- power_faithful_action, faithful_height_one_action, join_greedy: faithful actions of
  powers, of height-one groups on few variables, and of joins

extend_action works on the coordinate p-basis x_1, ..., x_n. A new generator T is first
seeded on K^p by the Verschiebung rule v(T)(f^p) = v(V(T))(f)^p, extended to every
monomial by the twisted product rule of its comultiplication and with v(T)(x_h) = 0.
The seed B is then corrected to B + sum z_h d_h, with z solving the commutation
equations variable by variable, and once more inside the joint kernel of the earlier
operators so that v(T)^(p^m) = v(Q).
"""

from __future__ import annotations

from typing import Optional, Sequence

from src.actions.action import ModuleAlgebraAction, OperatorEvaluator, product_action
from src.actions.verification import is_generically_free
from src.diffop.operator import (
    DiffOp,
    apply,
    commutator,
    derivation_coefficients,
    derivation_order,
    from_values,
    is_derivation,
    order_level,
    power,
    sum_operators,
)
from src.field.rational_function import (
    Exponent,
    FunctionField,
    RationalFunction,
    frobenius,
    member_subfield,
)
from src.groupscheme.descriptor import (
    Explicit,
    GroupSchemeDescriptor,
    HeightOne,
    dual,
    frobenius_kernel,
    invariants,
    is_commutative,
)
from src.groupscheme.presentation import HopfGenerator, HopfPresentation
from src.groupscheme.young import YoungDiagram, young_join
from src.solver.linear_algebra import prime_field_rows, rank_over_field, rank_over_prime_field
from src.solver.system import DiffSystem, solve_single, solve_system
from src.utils.errors import (
    DependentMultipliers,
    DimensionTooSmall,
    ExtensionObstruction,
    HeightBudgetExceeded,
    Incompatible,
    InvalidAction,
    InvalidMultipliers,
    InvalidVariables,
    JoinInfeasible,
    NoSolution,
    NotSupported,
    OrderAssertionFailed,
)
from src.utils.logging import log_debug, log_info, log_process_end, log_process_start
from src.utils.settings import BudgetSettings, resolve


# ============================================================================
# Height one
# ============================================================================


def canonical_block_derivation(
    field: FunctionField, block: Sequence[str], budget: Optional[BudgetSettings] = None
) -> DiffOp:
    """
    The derivation sum_i (x_1 ... x_(i-1))^(p-1) d_(x_i) over the block variables.

    Raises:
        HeightBudgetExceeded: If the block is longer than the height budget.
        OrderAssertionFailed: If the derivation does not have order p^s.
    """
    settings = resolve(budget)
    s = len(block)
    if s == 0:
        raise InvalidVariables("a block needs at least one variable")
    if s > settings.height_budget:
        raise HeightBudgetExceeded(f"block of {s} variables exceeds the height budget")
    p = field.p
    prefix = field.one
    terms: dict[tuple[int, ...], RationalFunction] = {}
    for name in block:
        orders = [0] * field.n
        orders[field.index(name)] = 1
        terms[tuple(orders)] = prefix ** (p - 1)
        prefix = prefix * field.variable(name)
    op = DiffOp.from_terms(field, terms)
    order = derivation_order(op, settings)
    if order != p**s:
        raise OrderAssertionFailed(f"block derivation has order {order}, expected {p**s}")
    return op


def height_one_action(
    field: FunctionField,
    diagram: Optional[YoungDiagram],
    mu_count: int = 0,
    variables: Optional[Sequence[str]] = None,
    budget: Optional[BudgetSettings] = None,
) -> ModuleAlgebraAction:
    """
    A generically free action of HeightOne(diagram, mu_count).

    Rows take consecutive blocks of the given variables (all of K's by default); each
    mu_p factor takes one further variable y and acts by y d_y.

    Raises:
        DimensionTooSmall: If there are fewer variables than boxes plus mu_p factors.
    """
    names = tuple(variables) if variables is not None else field.variables
    group = HeightOne(field.p, diagram, mu_count)
    presentation = dual(group, budget)
    assignment = _level_one_assignment(field, presentation, names, budget)
    return ModuleAlgebraAction(field, group, presentation, assignment)


def _level_one_assignment(
    field: FunctionField,
    presentation: HopfPresentation,
    names: Sequence[str],
    budget: Optional[BudgetSettings],
) -> dict[str, DiffOp]:
    """Canonical blocks for the unipotent generators, y d_y for the multiplicative ones."""
    for name in names:
        field.index(name)
    needed = sum(1 if g.is_multiplicative else g.p_exponent for g in presentation.generators)
    if needed > len(names):
        raise DimensionTooSmall(
            f"Lie dimension {needed} exceeds the {len(names)} available variables"
        )
    assignment: dict[str, DiffOp] = {}
    cursor = 0
    for gen in presentation.generators:
        if gen.is_multiplicative:
            name = names[cursor]
            cursor += 1
            assignment[gen.name] = DiffOp.partial(field, name).scale(field.variable(name))
        else:
            block = names[cursor : cursor + gen.p_exponent]
            cursor += gen.p_exponent
            assignment[gen.name] = canonical_block_derivation(field, block, budget)
    return assignment


def pbasis_family(
    action: ModuleAlgebraAction, budget: Optional[BudgetSettings] = None
) -> list[DiffOp]:
    """
    The p-powers v(U)^(p^k), 0 <= k < m, of the level-1 unipotent generators.

    Each generator contributes its powers from the highest one down.
    """
    evaluator = OperatorEvaluator(action, budget)
    family = []
    for gen in action.dual.generators:
        if gen.level != 1 or gen.is_multiplicative:
            continue
        for k in reversed(range(gen.p_exponent)):
            family.append(evaluator.generator_power(gen.name, action.p**k))
    return family


def adapted_pbasis(
    derivations: Sequence[DiffOp], budget: Optional[BudgetSettings] = None
) -> list[RationalFunction]:
    """
    Elements t_1, ..., t_s with E_i(t_i) = 1 and E_j(t_i) = 0 for j < i.

    Raises:
        NoSolution: If the derivations are not independent in the required sense.
    """
    basis = []
    for i, op in enumerate(derivations):
        basis.append(solve_single(op, op.field.one, 1, derivations[:i], budget))
    return basis


# ============================================================================
# Extension
# ============================================================================


def _check_restriction(base: HopfPresentation, truncated: HopfPresentation) -> None:
    if len(base.names) != len(truncated.names):
        raise InvalidAction("the base action does not match ker F^r of the target")
    for old, new in zip(base.names, truncated.names):
        if base.structure_key(old) != truncated.structure_key(new):
            raise InvalidAction(
                f"base generator {old} does not match target generator {new}"
            )


def _seed_operator(
    field: FunctionField,
    verschiebung_image: DiffOp,
    tail: list[tuple[int, DiffOp, DiffOp]],
    level: int,
) -> DiffOp:
    """The operator B of orders below p^level fixed by the Verschiebung rule."""
    p = field.p
    small: dict[Exponent, RationalFunction] = {(0,) * field.n: field.zero}

    def on_small(rho: Exponent) -> RationalFunction:
        if rho not in small:
            h = max(i for i, e in enumerate(rho) if e)
            previous = tuple(e - (i == h) for i, e in enumerate(rho))
            f = field.monomial(previous)
            g = field.variable(field.variables[h])
            value = on_small(previous) * g
            for c, first, second in tail:
                value = value + apply(first, f) * apply(second, g) * c
            small[rho] = value
        return small[rho]

    values: dict[Exponent, RationalFunction] = {}
    for m in field.box(level):
        mu = tuple(e // p for e in m)
        rho = tuple(e % p for e in m)
        f = field.monomial(tuple(p * e for e in mu))
        g = field.monomial(rho)
        value = frobenius(apply(verschiebung_image, field.monomial(mu)), 1) * g
        value = value + f * on_small(rho)
        for c, first, second in tail:
            value = value + apply(first, f) * apply(second, g) * c
        values[m] = value
    return from_values(field, values, level)


def _system_shape(
    current: ModuleAlgebraAction,
) -> tuple[list[DiffOp], list[int], list[dict[Exponent, int]]]:
    """Operators, order exponents and reductions of the generators defined so far."""
    names = current.dual.names
    index = {name: i for i, name in enumerate(names)}
    operators, orders, reductions = [], [], []
    for gen in current.dual.generators:
        operators.append(current.operator(gen.name))
        orders.append(gen.p_exponent)
        reduction: dict[Exponent, int] = {}
        for coeff, mono in gen.relation_tail:
            exponents = [0] * len(names)
            for name, e in mono:
                exponents[index[name]] += e
            key = tuple(exponents)
            reduction[key] = (reduction.get(key, 0) + coeff) % current.p
        reductions.append({k: v for k, v in reduction.items() if v})
    return operators, orders, reductions


def _partial_action(
    field: FunctionField,
    p: int,
    generators: list[HopfGenerator],
    assignment: dict[str, DiffOp],
) -> ModuleAlgebraAction:
    presentation = HopfPresentation(p, tuple(generators))
    group = Explicit(p, presentation=None, dual_presentation=presentation, name="partial")
    return ModuleAlgebraAction(
        field, group, presentation, {g.name: assignment[g.name] for g in generators}
    )


def _with_coordinates(seed: DiffOp, values: Sequence[RationalFunction]) -> DiffOp:
    field = seed.field
    corrections = [
        DiffOp.partial(field, name).scale(value)
        for name, value in zip(field.variables, values)
        if not value.is_zero
    ]
    return seed + sum_operators(field, corrections)


def check_derivation_defects(
    candidate: DiffOp,
    gen: HopfGenerator,
    current: ModuleAlgebraAction,
    relation: DiffOp,
    settings: BudgetSettings,
) -> Optional[DiffOp]:
    """
    Check the defect operators of a candidate for gen that must be derivations.

    [candidate, D] must be a derivation for every earlier generator D once candidate
    commutes with all earlier generators of lower level than D. When candidate commutes
    with every earlier generator, candidate^(p^m) - v(Q) must be a derivation too.

    Returns:
        The relation defect candidate^(p^m) - v(Q), or None while some earlier
        generator does not commute with candidate.

    Raises:
        ExtensionObstruction: If a defect operator is not a derivation.
    """
    brackets = [
        (earlier, commutator(candidate, current.operator(earlier.name), settings))
        for earlier in current.dual.generators
    ]
    for earlier, bracket in brackets:
        lower = (b for e, b in brackets if e.level < earlier.level)
        if all(b.is_zero for b in lower) and not is_derivation(bracket):
            raise ExtensionObstruction(f"[{gen.name}, {earlier.name}] is not a derivation")
    if any(not bracket.is_zero for _, bracket in brackets):
        return None
    defect = power(candidate, current.p**gen.p_exponent, settings) - relation
    if not is_derivation(defect):
        raise ExtensionObstruction(f"relation defect of {gen.name} is not a derivation")
    return defect


def _extend_generator(
    current: ModuleAlgebraAction, gen: HopfGenerator, settings: BudgetSettings
) -> DiffOp:
    field = current.field
    p = field.p
    evaluator = OperatorEvaluator(current, settings)
    verschiebung_image = evaluator.polynomial(gen.verschiebung)
    tail = [(c, evaluator.monomial(a), evaluator.monomial(b)) for c, a, b in gen.comul_tail]
    relation = evaluator.polynomial(gen.relation_tail)
    seed = _seed_operator(field, verschiebung_image, tail, gen.level)
    log_debug(f"seed for {gen.name} computed at level {gen.level}")
    check_derivation_defects(seed, gen, current, relation, settings)

    operators, orders, reductions = _system_shape(current)
    partials = [DiffOp.partial(field, name) for name in field.variables]
    values: list[RationalFunction] = []
    for g, name in enumerate(field.variables):
        x_g = field.variable(name)
        rhs = []
        for op in operators:
            image = apply(op, x_g)
            derivatives = [apply(d, image) for d in partials]
            if any(not derivatives[h].is_zero for h in range(g, field.n)):
                raise ExtensionObstruction(
                    f"coordinate p-basis not adapted at {name}"
                )
            value = apply(seed, image)
            for h in range(g):
                value = value + values[h] * derivatives[h]
            rhs.append(value)
        system = DiffSystem(field, tuple(operators), tuple(rhs), tuple(orders), tuple(reductions))
        try:
            values.append(solve_system(system, budget=settings))
        except Incompatible as e:
            raise ExtensionObstruction(f"commutation system for {gen.name} at {name}: {e}") from e

    candidate = _with_coordinates(seed, values)
    exponent = p**gen.p_exponent
    defect = check_derivation_defects(candidate, gen, current, relation, settings)
    if defect is None:
        raise ExtensionObstruction(f"{gen.name} does not commute with the earlier operators")
    if not defect.is_zero:
        lowered = power(candidate, exponent - 1, settings)
        level = max([order_level(lowered)] + [order_level(op) for op in operators] + [1])
        for g, name in enumerate(field.variables):
            target = -apply(defect, field.variable(name))
            if target.is_zero:
                continue
            try:
                y = solve_single(lowered, target, level, operators, settings)
            except NoSolution as e:
                raise ExtensionObstruction(f"relation of {gen.name} at {name}: {e}") from e
            values[g] = values[g] + y
        candidate = _with_coordinates(seed, values)

    if power(candidate, exponent, settings) != relation:
        raise ExtensionObstruction(f"{gen.name}^{exponent} differs from its relation")
    for op in operators:
        if not commutator(candidate, op, settings).is_zero:
            raise ExtensionObstruction(f"{gen.name} does not commute with the earlier operators")
    return candidate


def extend_action(
    base: ModuleAlgebraAction,
    target: GroupSchemeDescriptor,
    budget: Optional[BudgetSettings] = None,
) -> ModuleAlgebraAction:
    """
    Extend a generically free action of ker F^r to an action of target.

    The base generators are matched by position with the generators of level <= r of
    dual(target) and keep their operators.

    Raises:
        DimensionTooSmall: If the Lie dimension of target exceeds the dimension.
        NotSupported: For non-commutative targets or multiplicative generators above
            level 1.
        InvalidAction: If the base does not present ker F^r of target or is not
            generically free.
        ExtensionObstruction: If a required system has no solution.
    """
    settings = resolve(budget)
    field = base.field
    if not is_commutative(target) or not base.dual.commutative:
        raise NotSupported("extension is implemented for commutative groups")
    if invariants(target, settings).lie_dim > field.n:
        raise DimensionTooSmall(f"{field.n} variables are too few for the target")
    full = dual(target, settings)
    r = base.dual.height
    truncated = full.truncate(r)
    _check_restriction(base.dual, truncated)
    if not is_generically_free(base, settings):
        raise InvalidAction("the base action is not generically free")

    assignment = {
        new: base.operator(old) for new, old in zip(truncated.names, base.dual.names)
    }
    if r >= full.height:
        return ModuleAlgebraAction(field, target, full, assignment)

    log_process_start(f"extend_action to height {full.height}")
    generators = list(truncated.generators)
    for gen in full.generators:
        if gen.level <= r:
            continue
        if gen.is_multiplicative:
            raise NotSupported(f"multiplicative generator {gen.name} above level 1")
        current = _partial_action(field, field.p, generators, assignment)
        try:
            assignment[gen.name] = _extend_generator(current, gen, settings)
        except ExtensionObstruction:
            log_process_end("extend_action", success=False)
            raise
        generators.append(gen)
        log_debug(f"extended {gen.name} at level {gen.level}")
    log_process_end("extend_action")
    return ModuleAlgebraAction(field, target, full, assignment)


# ============================================================================
# Faithful actions of powers, small dimensions and joins
# ============================================================================


def power_faithful_action(
    group: GroupSchemeDescriptor,
    ell: int,
    field: FunctionField,
    multipliers: Sequence[Sequence[RationalFunction]],
    budget: Optional[BudgetSettings] = None,
) -> ModuleAlgebraAction:
    """
    A faithful action of group^ell: copy i scales the height-one derivations by row i.

    Raises:
        InvalidMultipliers: If the matrix shape is wrong or an entry is not a nonzero
            element of K^p.
        DependentMultipliers: If the rows are F_p-linearly dependent.
        DimensionTooSmall: If the Lie dimension of group exceeds the dimension.
    """
    settings = resolve(budget)
    if ell < 1:
        raise InvalidMultipliers("ell must be positive")
    if not is_commutative(group):
        raise NotSupported("faithful powers are built for commutative groups")
    info = invariants(group, settings)
    if info.lie_dim > field.n:
        raise DimensionTooSmall(f"Lie dimension {info.lie_dim} exceeds {field.n}")
    diagram, mu = frobenius_kernel(group)
    if mu:
        raise NotSupported("faithful powers are built for unipotent groups")
    rows = diagram.rows if diagram else ()
    if len(multipliers) != ell or any(len(row) != len(rows) for row in multipliers):
        raise InvalidMultipliers(f"expected a {ell} x {len(rows)} multiplier matrix")
    for row in multipliers:
        for f in row:
            if f.field != field or f.is_zero or not member_subfield(f, 1):
                raise InvalidMultipliers(f"multiplier {f!r} is not a nonzero p-th power")
    rank = rank_over_prime_field(field.p, prime_field_rows(field, multipliers))
    if rank != ell:
        raise DependentMultipliers(f"multiplier rows have F_p-rank {rank} < {ell}")

    log_process_start(f"power_faithful_action (ell={ell})")
    base = height_one_action(field, diagram, 0, budget=settings)
    copies = []
    for row in multipliers:
        scaled = {
            name: base.operator(name).scale(f) for name, f in zip(base.dual.names, row)
        }
        copy = ModuleAlgebraAction(field, base.group, base.dual, scaled)
        if info.frobenius_height > 1:
            copy = extend_action(copy, group, settings)
        copies.append(copy)
    for i, first in enumerate(copies):
        for second in copies[i + 1 :]:
            for a in first.assignment.values():
                for b in second.assignment.values():
                    if not commutator(a, b, settings).is_zero:
                        log_process_end("power_faithful_action", success=False)
                        raise ExtensionObstruction("extended copies do not commute")
    log_process_end("power_faithful_action")
    return product_action(copies)


def faithful_height_one_action(
    field: FunctionField,
    diagram: YoungDiagram,
    budget: Optional[BudgetSettings] = None,
) -> ModuleAlgebraAction:
    """
    A faithful action of HeightOne(diagram) on as many variables as the diagram is wide.

    Row i of length n_i acts by (x_1^(p i) D)^(p^(n - n_i)), D the canonical block on
    all n variables.

    Raises:
        DimensionTooSmall: If the diagram is wider than the number of variables.
    """
    n = field.n
    if diagram.width > n:
        raise DimensionTooSmall(f"rows of length {diagram.width} need {diagram.width} variables")
    p = field.p
    block = canonical_block_derivation(field, field.variables, budget)
    group = HeightOne(p, diagram, 0)
    presentation = dual(group, budget)
    x1 = field.variable(field.variables[0])
    assignment = {}
    for i, (gen, length) in enumerate(zip(presentation.generators, diagram.rows)):
        k = n - length
        scale = frobenius(x1**i, k + 1)
        assignment[gen.name] = power(block, p**k, budget).scale(scale)
    return ModuleAlgebraAction(field, group, presentation, assignment)


def join_greedy(
    actions: Sequence[ModuleAlgebraAction], budget: Optional[BudgetSettings] = None
) -> ModuleAlgebraAction:
    """
    An action of the group whose diagram is the join of the inputs' diagrams.

    Row by row, the first input derivation long enough whose socle power is outside the
    K-span of the socle powers chosen so far is taken, raised to the p-power of the
    right order.

    Raises:
        NotSupported: For inputs that are not unipotent of height one.
        DimensionTooSmall: If the join has more boxes than variables.
        JoinInfeasible: If no candidate escapes the span.
    """
    if not actions:
        raise InvalidAction("nothing to join")
    settings = resolve(budget)
    field = actions[0].field
    p = field.p
    candidates: list[tuple[DiffOp, int]] = []
    diagrams = []
    for action in actions:
        if action.field != field:
            raise InvalidAction("joined actions act on different fields")
        if any(g.level != 1 or g.is_multiplicative for g in action.dual.generators):
            raise NotSupported("join expects unipotent height-one actions")
        diagram, _ = frobenius_kernel(action.group)
        if diagram is not None:
            diagrams.append(diagram)
        candidates.extend(
            (action.operator(g.name), g.p_exponent) for g in action.dual.generators
        )
    if not diagrams:
        raise InvalidAction("nothing to join")
    joined = young_join(diagrams)
    if joined.boxes > field.n:
        raise DimensionTooSmall(f"the join {joined} needs {joined.boxes} variables")
    ops = [op for op, _ in candidates]
    for i, a in enumerate(ops):
        for b in ops[i + 1 :]:
            if not commutator(a, b, settings).is_zero:
                raise InvalidAction("joined operators must commute")

    log_process_start(f"join_greedy ({joined})")
    chosen: list[DiffOp] = []
    socle_rows: list[list[RationalFunction]] = []
    for length in joined.rows:
        for op, m in candidates:
            if m < length:
                continue
            socle = power(op, p ** (m - 1), settings)
            rows = socle_rows + [list(derivation_coefficients(socle))]
            if rank_over_field(field, rows) < len(rows):
                continue
            selected = power(op, p ** (m - length), settings)
            if derivation_order(selected, settings) != p**length:
                raise OrderAssertionFailed(f"selected derivation is not of order {p**length}")
            chosen.append(selected)
            socle_rows = rows
            break
        else:
            log_process_end("join_greedy", success=False)
            raise JoinInfeasible(f"no derivation escapes the span for a row of length {length}")
    group = HeightOne(p, joined, 0)
    presentation = dual(group, settings)
    log_info(f"joined {len(actions)} actions into diagram {joined}")
    log_process_end("join_greedy")
    return ModuleAlgebraAction(field, group, presentation, dict(zip(presentation.names, chosen)))


def build_action(
    group: GroupSchemeDescriptor,
    field: FunctionField,
    budget: Optional[BudgetSettings] = None,
) -> ModuleAlgebraAction:
    """
    A generically free action of a commutative group: canonical blocks on ker F, then
    extend_action up to the full height.

    Raises:
        NotSupported: For non-commutative groups.
        DimensionTooSmall: If the Lie dimension exceeds the number of variables.
    """
    settings = resolve(budget)
    if not is_commutative(group):
        raise NotSupported("actions are built for commutative groups")
    full = dual(group, settings)
    level_one = full.truncate(1)
    assignment = _level_one_assignment(field, level_one, field.variables, settings)
    if full.height <= 1:
        return ModuleAlgebraAction(field, group, full, assignment)
    kernel = Explicit(field.p, presentation=None, dual_presentation=level_one, name="ker F")
    base = ModuleAlgebraAction(field, kernel, level_one, assignment)
    return extend_action(base, group, settings)
