"""
Descriptors of infinitesimal group schemes and their invariants.

Supported families:

- HeightOne(diagram, mu_count): the product of Frobenius kernels of Witt groups given
  by a Young diagram, times mu_p^mu_count
- KerFMinusV(n): the kernel of F^n - V on length-n Witt vectors (autodual)
- KerF2MinusV: the kernel of F^2 - V on length-2 Witt vectors, of Frobenius height 3
- Explicit: a group given by its own presentation and, when known, its dual
- Product: a finite product of the above

expand() presents the coordinate algebra of the group; dual() presents the coordinate
algebra of its Cartier dual, i.e. the algebra whose generators act on a field. Levels
on the dual side follow the Frobenius kernels: truncating to level <= i presents the
dual of ker F^i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from sympy import isprime
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from src.groupscheme.presentation import (
    HopfGenerator,
    HopfPresentation,
    concatenate,
    single,
)
from src.groupscheme.witt import witt_sum_polynomials, witt_tail
from src.groupscheme.young import YoungDiagram, necessary_condition
from src.utils.constants import PRODUCT_SUFFIX_SEPARATOR, DescriptorKind, GeneratorKind
from src.utils.errors import (
    InvalidDescriptor,
    NotCommutative,
    UnsupportedDescriptor,
    UnsupportedDual,
)
from src.utils.settings import BudgetSettings


def _check_prime(p: int) -> None:
    if not isprime(p):
        raise InvalidDescriptor(f"{p} is not a prime")


@dataclass(frozen=True)
class HeightOne:
    p: int
    diagram: Optional[YoungDiagram]
    mu_count: int = 0

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if self.mu_count < 0:
            raise InvalidDescriptor("mu_count must be non-negative")

    @property
    def kind(self) -> DescriptorKind:
        return DescriptorKind.YOUNG


@dataclass(frozen=True)
class KerFMinusV:
    p: int
    n: int

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if self.n < 1:
            raise InvalidDescriptor("KerFMinusV needs n >= 1")

    @property
    def kind(self) -> DescriptorKind:
        return DescriptorKind.KER_FV


@dataclass(frozen=True)
class KerF2MinusV:
    p: int

    def __post_init__(self) -> None:
        _check_prime(self.p)

    @property
    def kind(self) -> DescriptorKind:
        return DescriptorKind.KER_F2V


@dataclass(frozen=True)
class Explicit:
    """
    A group given by presentations.

    presentation is the coordinate algebra of the group, dual_presentation the one of
    its Cartier dual. At least one is required; an autodual group may omit the dual.
    """

    p: int
    presentation: Optional[HopfPresentation]
    dual_presentation: Optional[HopfPresentation] = None
    autodual: bool = False
    name: str = "explicit"

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if self.presentation is None and self.dual_presentation is None:
            raise InvalidDescriptor("an explicit group needs a presentation")
        for pres in (self.presentation, self.dual_presentation):
            if pres is not None and pres.p != self.p:
                raise InvalidDescriptor("presentation characteristic mismatch")

    @property
    def kind(self) -> DescriptorKind:
        return DescriptorKind.EXPLICIT


@dataclass(frozen=True)
class Product:
    p: int
    factors: tuple["GroupSchemeDescriptor", ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise InvalidDescriptor("a product needs at least one factor")
        if any(f.p != self.p for f in self.factors):
            raise InvalidDescriptor("product factors must share the characteristic")

    @property
    def kind(self) -> DescriptorKind:
        return DescriptorKind.PRODUCT


GroupSchemeDescriptor = Union[HeightOne, KerFMinusV, KerF2MinusV, Explicit, Product]


# ============================================================================
# Presentations
# ============================================================================


def _witt_chain(
    p: int,
    names: list[str],
    budget: Optional[BudgetSettings],
    *,
    leveled: bool,
) -> list[HopfGenerator]:
    """Generators of a Witt chain T_1^p = 0, T_i^p = T_(i-1) (leveled) or a_i^p = 0."""
    data = witt_sum_polynomials(p, len(names), budget)
    generators = []
    for i, name in enumerate(names):
        previous = single(names[i - 1]) if i else ()
        generators.append(
            HopfGenerator(
                name=name,
                level=i + 1 if leveled else 1,
                relation_tail=previous if leveled else (),
                comul_tail=witt_tail(data, i, names),
                verschiebung=previous,
            )
        )
    return generators


def _kerfv_names(n: int) -> list[str]:
    return [f"T{i}" for i in range(1, n + 1)]


KER_F2V_DUAL_NAMES = ["T0", "T1p", "T1"]


def expand(
    desc: GroupSchemeDescriptor, budget: Optional[BudgetSettings] = None
) -> HopfPresentation:
    """
    Presentation of the coordinate algebra of the group.

    Raises:
        HeightBudgetExceeded: If a Witt length exceeds the height budget.
        UnsupportedDescriptor: For an explicit group known only through its dual.
    """
    p = desc.p
    if isinstance(desc, HeightOne):
        generators: list[HopfGenerator] = []
        rows = desc.diagram.rows if desc.diagram else ()
        for i, length in enumerate(rows, start=1):
            if len(rows) == 1:
                names = [f"T{j}" for j in range(1, length + 1)]
            else:
                names = [f"T{i}_{j}" for j in range(1, length + 1)]
            generators.extend(_witt_chain(p, names, budget, leveled=False))
        for j in range(1, desc.mu_count + 1):
            name = f"M{j}"
            generators.append(
                HopfGenerator(
                    name=name,
                    level=1,
                    comul_tail=((1, ((name, 1),), ((name, 1),)),),
                    kind=GeneratorKind.MULTIPLICATIVE,
                )
            )
        return HopfPresentation(p, tuple(generators))
    if isinstance(desc, KerFMinusV):
        return HopfPresentation(
            p, tuple(_witt_chain(p, _kerfv_names(desc.n), budget, leveled=True))
        )
    if isinstance(desc, KerF2MinusV):
        data = witt_sum_polynomials(p, 2, budget)
        names = ["T0", "T1"]
        return HopfPresentation(
            p,
            (
                HopfGenerator(name="T0", level=1),
                HopfGenerator(
                    name="T1",
                    level=2,
                    p_exponent=2,
                    relation_tail=single("T0"),
                    comul_tail=witt_tail(data, 1, names),
                    verschiebung=single("T0"),
                ),
            ),
        )
    if isinstance(desc, Explicit):
        if desc.presentation is None:
            if desc.autodual and desc.dual_presentation is not None:
                return desc.dual_presentation
            raise UnsupportedDescriptor(f"{desc.name} has no group-side presentation")
        return desc.presentation
    if isinstance(desc, Product):
        return concatenate(
            [
                expand(f, budget).with_suffix(f"{PRODUCT_SUFFIX_SEPARATOR}{k}")
                for k, f in enumerate(desc.factors, start=1)
            ]
        )
    raise UnsupportedDescriptor(f"unknown descriptor {desc!r}")


def dual(desc: GroupSchemeDescriptor, budget: Optional[BudgetSettings] = None) -> HopfPresentation:
    """
    Presentation of the Cartier dual, whose generators act on a field.

    Raises:
        UnsupportedDual: For an explicit group without declared dual that is not autodual.
    """
    p = desc.p
    if isinstance(desc, HeightOne):
        generators: list[HopfGenerator] = []
        rows = desc.diagram.rows if desc.diagram else ()
        for i, length in enumerate(rows, start=1):
            generators.append(HopfGenerator(name=f"U{i}", level=1, p_exponent=length))
        for j in range(1, desc.mu_count + 1):
            name = f"E{j}"
            generators.append(
                HopfGenerator(
                    name=name,
                    level=1,
                    relation_tail=single(name),
                    kind=GeneratorKind.MULTIPLICATIVE,
                )
            )
        return HopfPresentation(p, tuple(generators))
    if isinstance(desc, KerFMinusV):
        return expand(desc, budget)
    if isinstance(desc, KerF2MinusV):
        # Same leveled chain as dual(KerFMinusV(p, 3)); the Cartier dual has Lie dimension 2
        chain = _witt_chain(p, KER_F2V_DUAL_NAMES, budget, leveled=True)
        return HopfPresentation(p, tuple(chain))
    if isinstance(desc, Explicit):
        if desc.dual_presentation is not None:
            return desc.dual_presentation
        if desc.autodual and desc.presentation is not None:
            return desc.presentation
        raise UnsupportedDual(f"{desc.name} has no declared dual presentation")
    if isinstance(desc, Product):
        return concatenate(
            [
                dual(f, budget).with_suffix(f"{PRODUCT_SUFFIX_SEPARATOR}{k}")
                for k, f in enumerate(desc.factors, start=1)
            ]
        )
    raise UnsupportedDescriptor(f"unknown descriptor {desc!r}")


def dual_descriptor(
    desc: GroupSchemeDescriptor, budget: Optional[BudgetSettings] = None
) -> Explicit:
    """The Cartier dual as an explicit descriptor; dual(dual_descriptor(G)) == expand(G)."""
    return Explicit(
        desc.p,
        presentation=dual(desc, budget),
        dual_presentation=expand(desc, budget),
        name=f"dual of {describe(desc)}",
    )


# ============================================================================
# Invariants
# ============================================================================


@dataclass(frozen=True)
class GroupInvariants:
    lie_dim: int
    frobenius_height: int
    verschiebung_index: int
    order_exponent: int
    commutative: bool

    def order_text(self) -> str:
        return f"p^{self.order_exponent}"


def is_commutative(desc: GroupSchemeDescriptor) -> bool:
    if isinstance(desc, Explicit):
        return all(
            pres.commutative
            for pres in (desc.presentation, desc.dual_presentation)
            if pres is not None
        )
    if isinstance(desc, Product):
        return all(is_commutative(f) for f in desc.factors)
    return True


def frobenius_kernel(desc: GroupSchemeDescriptor) -> tuple[Optional[YoungDiagram], int]:
    """
    The Young diagram of the unipotent part of ker F and the number of mu_p factors.

    Read from the level-1 generators of the dual presentation: a unipotent generator
    with U^(p^m) = 0 contributes a row of length m.
    """
    if isinstance(desc, HeightOne):
        return desc.diagram, desc.mu_count
    if isinstance(desc, (KerFMinusV, KerF2MinusV)):
        return YoungDiagram((1,)), 0
    if isinstance(desc, Product):
        rows: list[int] = []
        mu = 0
        for factor in desc.factors:
            diagram, count = frobenius_kernel(factor)
            rows.extend(diagram.rows if diagram else ())
            mu += count
        return (YoungDiagram(tuple(sorted(rows, reverse=True))) if rows else None), mu
    presentation = dual(desc)
    rows = []
    mu = 0
    for gen in presentation.generators:
        if gen.level != 1:
            continue
        if gen.is_multiplicative:
            mu += 1
        else:
            rows.append(gen.p_exponent)
    return (YoungDiagram(tuple(sorted(rows, reverse=True))) if rows else None), mu


def _lie_dim_from_group_side(presentation: HopfPresentation) -> int:
    names = presentation.names
    rows = []
    for gen in presentation.generators:
        if gen.is_multiplicative:
            continue
        row = [0] * len(names)
        for coeff, mono in gen.relation_tail:
            if len(mono) == 1 and mono[0][1] == 1:
                row[names.index(mono[0][0])] = coeff
        rows.append(row)
    if not rows:
        return len(names)
    domain = GF(presentation.p)
    matrix = DomainMatrix(
        [[domain(c) for c in row] for row in rows], (len(rows), len(names)), domain
    )
    return len(names) - matrix.rank()


def _verschiebung_index(presentation: HopfPresentation) -> int:
    unipotent = [g for g in presentation.generators if not g.is_multiplicative]
    if not unipotent:
        return 0
    images = {g.name: g.verschiebung for g in unipotent}
    depth: dict[str, int] = {}

    def chain(name: str) -> int:
        if name not in depth:
            image = images.get(name, ())
            if not image:
                depth[name] = 1
            else:
                depth[name] = 1 + max(
                    max(chain(n) for n, _ in mono) for _, mono in image
                )
        return depth[name]

    return max(chain(g.name) for g in unipotent)


def invariants(
    desc: GroupSchemeDescriptor, budget: Optional[BudgetSettings] = None
) -> GroupInvariants:
    """Lie dimension, Frobenius height, Verschiebung index and order exponent."""
    commutative = is_commutative(desc)
    if isinstance(desc, HeightOne):
        boxes = desc.diagram.boxes if desc.diagram else 0
        trivial = boxes + desc.mu_count == 0
        return GroupInvariants(
            lie_dim=boxes + desc.mu_count,
            frobenius_height=0 if trivial else 1,
            verschiebung_index=desc.diagram.width if desc.diagram else 0,
            order_exponent=boxes + desc.mu_count,
            commutative=commutative,
        )
    if isinstance(desc, KerFMinusV):
        return GroupInvariants(1, desc.n, desc.n, desc.n, commutative)
    if isinstance(desc, KerF2MinusV):
        return GroupInvariants(1, 3, 2, 3, commutative)
    if isinstance(desc, Product):
        parts = [invariants(f, budget) for f in desc.factors]
        return GroupInvariants(
            lie_dim=sum(i.lie_dim for i in parts),
            frobenius_height=max(i.frobenius_height for i in parts),
            verschiebung_index=max(i.verschiebung_index for i in parts),
            order_exponent=sum(i.order_exponent for i in parts),
            commutative=commutative,
        )
    if isinstance(desc, Explicit):
        group_side = desc.presentation
        action_side = (
            desc.dual_presentation
            if desc.dual_presentation is not None
            else (group_side if desc.autodual else None)
        )
        if action_side is not None:
            diagram, mu = frobenius_kernel(desc)
            lie_dim = (diagram.boxes if diagram else 0) + mu
            height = action_side.height
        else:
            assert group_side is not None
            lie_dim = _lie_dim_from_group_side(group_side)
            height = group_side.height
        reference = group_side if group_side is not None else action_side
        assert reference is not None
        return GroupInvariants(
            lie_dim=lie_dim,
            frobenius_height=height,
            verschiebung_index=_verschiebung_index(reference),
            order_exponent=reference.order_exponent,
            commutative=commutative,
        )
    raise UnsupportedDescriptor(f"unknown descriptor {desc!r}")


def socle(desc: GroupSchemeDescriptor) -> HeightOne:
    """
    The socle alpha_p^r x mu_p^s, r the first column of the diagram of ker F.

    Raises:
        NotCommutative: For non-commutative groups.
    """
    if not is_commutative(desc):
        raise NotCommutative("the socle is computed for commutative groups")
    diagram, mu = frobenius_kernel(desc)
    r = diagram.first_column if diagram else 0
    return HeightOne(desc.p, YoungDiagram((1,) * r) if r else None, mu)


def ker_frobenius_power(
    desc: GroupSchemeDescriptor, i: int, budget: Optional[BudgetSettings] = None
) -> GroupSchemeDescriptor:
    """
    Descriptor of ker F^i; on the dual presentation this keeps the levels <= i.

    Raises:
        InvalidDescriptor: If i < 1.
    """
    if i < 1:
        raise InvalidDescriptor("ker F^i needs i >= 1")
    height = invariants(desc, budget).frobenius_height
    if i >= height:
        return desc
    if isinstance(desc, (KerFMinusV, KerF2MinusV)) and i == 1:
        return HeightOne(desc.p, YoungDiagram((1,)), 0)
    if isinstance(desc, KerFMinusV):
        return KerFMinusV(desc.p, i)
    if isinstance(desc, Product):
        return Product(desc.p, tuple(ker_frobenius_power(f, i, budget) for f in desc.factors))
    if isinstance(desc, (KerF2MinusV, Explicit)):
        truncated = dual(desc, budget).truncate(i)
        return Explicit(
            desc.p,
            presentation=None,
            dual_presentation=truncated,
            name=f"ker F^{i} of {describe(desc)}",
        )
    raise UnsupportedDescriptor(f"unknown descriptor {desc!r}")


def min_action_dimension(desc: GroupSchemeDescriptor) -> int:
    """Smallest dimension of a generically free action: the Lie dimension."""
    return invariants(desc).lie_dim


def necessary_conditions(desc: GroupSchemeDescriptor) -> dict[int, bool]:
    """Necessary-condition verdicts for dimensions 1..lie_dim."""
    diagram, mu = frobenius_kernel(desc)
    return {
        n: necessary_condition(diagram, mu, n)
        for n in range(1, max(invariants(desc).lie_dim, 1) + 1)
    }


def describe(desc: GroupSchemeDescriptor) -> str:
    """Short human-readable name of a descriptor."""
    if isinstance(desc, HeightOne):
        parts = []
        if desc.diagram is not None:
            parts.append(f"young({desc.diagram})")
        if desc.mu_count:
            parts.append(f"mu_p^{desc.mu_count}")
        return " x ".join(parts) or "trivial"
    if isinstance(desc, KerFMinusV):
        return f"kerFV(n={desc.n})"
    if isinstance(desc, KerF2MinusV):
        return "kerF2V"
    if isinstance(desc, Explicit):
        return desc.name
    return " x ".join(f"({describe(f)})" for f in desc.factors)


def describe_socle(desc: HeightOne) -> str:
    """Text such as "alpha_p^2 x mu_p^1"."""
    r = desc.diagram.first_column if desc.diagram else 0
    parts = []
    if r:
        parts.append("alpha_p" if r == 1 else f"alpha_p^{r}")
    if desc.mu_count:
        parts.append("mu_p" if desc.mu_count == 1 else f"mu_p^{desc.mu_count}")
    return " x ".join(parts) or "trivial"
