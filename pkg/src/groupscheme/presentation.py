"""
Hopf algebra presentations of infinitesimal group schemes.

A presentation lists generators T_1, ..., T_r in the order of a cofiltration. Each
generator carries

- level: its position in the cofiltration (truncating to level <= i presents ker F^i
  on the action side)
- p_exponent m and relation_tail Q: the relation T^(p^m) = Q, Q a polynomial in
  strictly earlier generators without constant term
- comul_tail R: Delta(T) = T (x) 1 + 1 (x) T + sum c A (x) B with A, B monomials in
  earlier generators
- verschiebung: the image of T under the Verschiebung, used to seed extensions of
  actions
- kind: unipotent, or multiplicative for mu_p factors (action side e^p = e)

Polynomials in generator names are frozen tuples of (coefficient, monomial) pairs and
monomials are tuples of (name, exponent) pairs, so presentations are hashable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import reduce
from typing import Iterable, Mapping, Sequence

from sympy.polys.domains import GF
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from src.field.parser import parse_polynomial
from src.field.rational_function import frobenius_polynomial
from src.utils.constants import GeneratorKind, TENSOR_SEPARATOR
from src.utils.errors import InvalidDescriptor, NotCommutative

Monomial = tuple[tuple[str, int], ...]
GeneratorPolynomial = tuple[tuple[int, Monomial], ...]
TailTerm = tuple[int, Monomial, Monomial]


# ============================================================================
# Polynomials in generator names
# ============================================================================


def monomial(*pairs: tuple[str, int]) -> Monomial:
    return tuple((name, e) for name, e in pairs if e)


def generator_polynomial(
    terms: Iterable[tuple[int, Monomial]], p: int
) -> GeneratorPolynomial:
    """Collect like terms, reduce coefficients mod p and drop zeros."""
    collected: dict[Monomial, int] = {}
    for coeff, mono in terms:
        mono = tuple((name, e) for name, e in mono if e)
        collected[mono] = (collected.get(mono, 0) + coeff) % p
    return tuple((c, m) for m, c in sorted(collected.items()) if c)


def single(name: str) -> GeneratorPolynomial:
    return ((1, ((name, 1),)),)


def polynomial_names(poly: GeneratorPolynomial) -> set[str]:
    return {name for _, mono in poly for name, _ in mono}


def polynomial_from_text(text: str, names: Sequence[str], p: int) -> GeneratorPolynomial:
    """Parse "T1^2 + 2*T0*U0" over the given generator names."""
    ring = PolyRing(list(names), GF(p), lex)
    parsed = parse_polynomial(text, ring)
    return generator_polynomial(
        (
            (int(coeff) % p, tuple((names[i], e) for i, e in enumerate(monom) if e))
            for monom, coeff in parsed.items()
        ),
        p,
    )


def monomial_from_text(text: str, names: Sequence[str], p: int) -> Monomial:
    poly = polynomial_from_text(text, names, p)
    if len(poly) != 1 or poly[0][0] != 1:
        raise InvalidDescriptor(f"{text!r} is not a monomial")
    return poly[0][1]


def monomial_to_text(mono: Monomial) -> str:
    if not mono:
        return "1"
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in mono)


def polynomial_to_text(poly: GeneratorPolynomial) -> str:
    if not poly:
        return "0"
    pieces = []
    for coeff, mono in poly:
        body = monomial_to_text(mono)
        if not mono:
            pieces.append(str(coeff))
        else:
            pieces.append(body if coeff == 1 else f"{coeff}*{body}")
    return " + ".join(pieces)


def _rename_monomial(mono: Monomial, mapping: Mapping[str, str]) -> Monomial:
    return tuple((mapping.get(name, name), e) for name, e in mono)


def _rename_polynomial(
    poly: GeneratorPolynomial, mapping: Mapping[str, str]
) -> GeneratorPolynomial:
    return tuple((c, _rename_monomial(m, mapping)) for c, m in poly)


# ============================================================================
# Generators and presentations
# ============================================================================


@dataclass(frozen=True)
class HopfGenerator:
    name: str
    level: int
    p_exponent: int = 1
    relation_tail: GeneratorPolynomial = ()
    comul_tail: tuple[TailTerm, ...] = ()
    verschiebung: GeneratorPolynomial = ()
    kind: GeneratorKind = GeneratorKind.UNIPOTENT

    @property
    def is_multiplicative(self) -> bool:
        return self.kind is GeneratorKind.MULTIPLICATIVE

    def referenced(self) -> set[str]:
        names = polynomial_names(self.relation_tail) | polynomial_names(self.verschiebung)
        for _, left, right in self.comul_tail:
            names |= {name for name, _ in left} | {name for name, _ in right}
        return names

    def renamed(self, mapping: Mapping[str, str]) -> HopfGenerator:
        return replace(
            self,
            name=mapping.get(self.name, self.name),
            relation_tail=_rename_polynomial(self.relation_tail, mapping),
            comul_tail=tuple(
                (c, _rename_monomial(a, mapping), _rename_monomial(b, mapping))
                for c, a, b in self.comul_tail
            ),
            verschiebung=_rename_polynomial(self.verschiebung, mapping),
        )


@dataclass(frozen=True)
class HopfPresentation:
    """An ordered list of generators with relations and comultiplication tails."""

    p: int
    generators: tuple[HopfGenerator, ...]
    commutative: bool = True
    extra_commutators: tuple[tuple[str, str, GeneratorPolynomial], ...] = ()
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        index: dict[str, int] = {}
        previous_level = 0
        for position, gen in enumerate(self.generators):
            if not gen.name.isidentifier():
                raise InvalidDescriptor(f"generator name {gen.name!r} is not an identifier")
            if gen.name in index:
                raise InvalidDescriptor(f"duplicate generator {gen.name}")
            if gen.level < 1 or gen.level < previous_level:
                raise InvalidDescriptor(
                    f"generator {gen.name} at level {gen.level} breaks the level order"
                )
            if gen.p_exponent < 1:
                raise InvalidDescriptor(f"generator {gen.name} needs p_exponent >= 1")
            self._check_generator(gen, set(index))
            index[gen.name] = position
            previous_level = gen.level
        for left, right, value in self.extra_commutators:
            if self.commutative:
                raise InvalidDescriptor("commutative presentations have no commutators")
            unknown = ({left, right} | polynomial_names(value)) - set(index)
            if unknown:
                raise InvalidDescriptor(f"commutator references unknown {sorted(unknown)}")
        object.__setattr__(self, "_index", index)

    def _check_generator(self, gen: HopfGenerator, earlier: set[str]) -> None:
        allowed = set(earlier)
        relation_names = polynomial_names(gen.relation_tail)
        if gen.is_multiplicative and gen.name in relation_names:
            if gen.relation_tail != single(gen.name) or gen.p_exponent != 1:
                raise InvalidDescriptor(f"multiplicative generator {gen.name} needs e^p = e")
            relation_names = relation_names - {gen.name}
        unknown = (relation_names | polynomial_names(gen.verschiebung)) - allowed
        tail_allowed = allowed | {gen.name} if gen.is_multiplicative else allowed
        for _, left, right in gen.comul_tail:
            if not left or not right:
                raise InvalidDescriptor(f"tail of {gen.name} has a constant side")
            unknown |= ({n for n, _ in left} | {n for n, _ in right}) - tail_allowed
        if unknown:
            raise InvalidDescriptor(
                f"generator {gen.name} references later or unknown generators {sorted(unknown)}"
            )
        for poly in (gen.relation_tail, gen.verschiebung):
            if any(not mono for _, mono in poly):
                raise InvalidDescriptor(f"generator {gen.name} has a constant term")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(gen.name for gen in self.generators)

    def generator(self, name: str) -> HopfGenerator:
        try:
            return self.generators[self._index[name]]
        except KeyError as e:
            raise InvalidDescriptor(f"unknown generator {name}") from e

    def index(self, name: str) -> int:
        self.generator(name)
        return self._index[name]

    @property
    def height(self) -> int:
        return max((gen.level for gen in self.generators), default=0)

    @property
    def order_exponent(self) -> int:
        """log_p of the dimension of the algebra."""
        return sum(gen.p_exponent for gen in self.generators)

    def truncate(self, level: int) -> HopfPresentation:
        """Sub-presentation of the generators with level <= level."""
        kept = tuple(gen for gen in self.generators if gen.level <= level)
        names = {gen.name for gen in kept}
        commutators = tuple(
            (a, b, v)
            for a, b, v in self.extra_commutators
            if {a, b} | polynomial_names(v) <= names
        )
        return HopfPresentation(
            self.p, kept, self.commutative or not commutators, commutators
        )

    def rename(self, mapping: Mapping[str, str]) -> HopfPresentation:
        return HopfPresentation(
            self.p,
            tuple(gen.renamed(mapping) for gen in self.generators),
            self.commutative,
            tuple(
                (mapping.get(a, a), mapping.get(b, b), _rename_polynomial(v, mapping))
                for a, b, v in self.extra_commutators
            ),
        )

    def with_suffix(self, suffix: str) -> HopfPresentation:
        return self.rename({name: f"{name}{suffix}" for name in self.names})

    def structure_key(self, name: str) -> tuple:
        """Name-free description of a generator, for matching presentations by position."""
        positions = {n: str(i) for i, n in enumerate(self.names)}
        gen = self.generator(name).renamed(positions)
        return (
            gen.level,
            gen.p_exponent,
            gen.kind,
            gen.relation_tail,
            gen.comul_tail,
            gen.verschiebung,
        )

    def describe_relations(self) -> list[str]:
        """Human-readable relations and comultiplications, one line each."""
        lines = []
        for gen in self.generators:
            exponent = self.p**gen.p_exponent
            lines.append(f"{gen.name}^{exponent} = {polynomial_to_text(gen.relation_tail)}")
            tail = " + ".join(
                (f"{c}*" if c != 1 else "")
                + f"{monomial_to_text(a)}{TENSOR_SEPARATOR}{monomial_to_text(b)}"
                for c, a, b in gen.comul_tail
            )
            coproduct = f"{gen.name}{TENSOR_SEPARATOR}1 + 1{TENSOR_SEPARATOR}{gen.name}"
            lines.append(f"Delta({gen.name}) = {coproduct}" + (f" + {tail}" if tail else ""))
        for a, b, v in self.extra_commutators:
            lines.append(f"[{a}, {b}] = {polynomial_to_text(v)}")
        return lines


def concatenate(presentations: Sequence[HopfPresentation]) -> HopfPresentation:
    """Tensor product of presentations, generators merged by level (stable)."""
    if not presentations:
        raise InvalidDescriptor("nothing to concatenate")
    p = presentations[0].p
    generators = sorted(
        (gen for pres in presentations for gen in pres.generators), key=lambda g: g.level
    )
    commutators = tuple(c for pres in presentations for c in pres.extra_commutators)
    return HopfPresentation(
        p,
        tuple(generators),
        all(pres.commutative for pres in presentations),
        commutators,
    )


# ============================================================================
# Primitivity of the relations
# ============================================================================


class _TensorSquare:
    """The polynomial ring on left and right copies of the generators."""

    def __init__(self, presentation: HopfPresentation) -> None:
        self.presentation = presentation
        names = presentation.names
        symbols = [f"L_{n}" for n in names] + [f"R_{n}" for n in names]
        self.ring = PolyRing(symbols, GF(presentation.p), lex)
        count = len(names)
        self.left = dict(zip(names, self.ring.gens[:count]))
        self.right = dict(zip(names, self.ring.gens[count:]))

    def evaluate(
        self, poly: GeneratorPolynomial, images: Mapping[str, PolyElement]
    ) -> PolyElement:
        total = self.ring.zero
        for coeff, mono in poly:
            term = reduce(
                lambda acc, pair: acc * images[pair[0]] ** pair[1], mono, self.ring.one
            )
            total += term * coeff
        return total

    def coproduct(self, name: str) -> PolyElement:
        gen = self.presentation.generator(name)
        total = self.left[name] + self.right[name]
        for coeff, a, b in gen.comul_tail:
            total += (
                self.evaluate(((1, a),), self.left) * self.evaluate(((1, b),), self.right) * coeff
            )
        return total

    def reduce(self, poly: PolyElement, names: Iterable[str]) -> PolyElement:
        rules = []
        for name in names:
            gen = self.presentation.generator(name)
            exponent = self.presentation.p**gen.p_exponent
            for side in (self.left, self.right):
                rules.append(
                    (
                        self.ring.gens.index(side[name]),
                        exponent,
                        self.evaluate(gen.relation_tail, side),
                    )
                )
        changed = True
        while changed:
            changed = False
            result = self.ring.zero
            for monom, coeff in poly.items():
                for position, exponent, replacement in rules:
                    if monom[position] >= exponent:
                        lowered = list(monom)
                        lowered[position] -= exponent
                        result += self.ring.from_dict({tuple(lowered): coeff}) * replacement
                        changed = True
                        break
                else:
                    result += self.ring.from_dict({monom: coeff})
            poly = result
        return poly


def primitive_defect(presentation: HopfPresentation, name: str) -> PolyElement:
    """
    Delta(P) - P (x) 1 - 1 (x) P for P = T^(p^m) - Q, reduced modulo the relations of
    the generators before T. Zero iff P is primitive.

    Raises:
        NotCommutative: For non-commutative presentations.
    """
    if not presentation.commutative:
        raise NotCommutative("primitivity is checked on commutative presentations")
    tensor = _TensorSquare(presentation)
    gen = presentation.generator(name)
    position = presentation.index(name)
    exponent = presentation.p**gen.p_exponent
    images = {n: tensor.coproduct(n) for n in presentation.names[: position + 1]}
    delta_p = frobenius_polynomial(images[name], exponent) - tensor.evaluate(
        gen.relation_tail, images
    )
    left_p = tensor.left[name] ** exponent - tensor.evaluate(gen.relation_tail, tensor.left)
    right_p = tensor.right[name] ** exponent - tensor.evaluate(gen.relation_tail, tensor.right)
    return tensor.reduce(delta_p - left_p - right_p, presentation.names[: position + 1])
