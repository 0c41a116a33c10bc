"""
State Collection Module

Pydantic models of every file the command line reads or writes, with conversions to
and from the domain objects.

Models:

1. GroupSpec: a group-scheme descriptor, discriminated on "type" (young, kerFV, kerF2V,
   explicit, product)
2. ExplicitGeneratorSpec / PresentationSpec: generator-by-generator presentations used by
   explicit groups
3. ActionFile: an action as p, variables, group and operator texts per generator
4. SystemRecord / SystemFile: a system of differential equations D_i(x) = a_i
5. CheckRecord / VerificationReportModel / SolveResultModel: reports written by verify
   and solve
6. GroupInfo: the invariants printed by info

File Operations:
- save_json() writes indented, key-stable JSON and creates parent directories
- load_json() / from_text() parse and validate; every failure becomes a
  MalformedInputError, with line and column for JSON syntax errors

Usage:
    from src.states.state_collection import ActionFile

    action = ActionFile.load_json("ptorsion.json").to_action()
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Any, Literal, Optional, Union

from pydantic import (
    AfterValidator,
    BaseModel,
    Field,
    TypeAdapter,
    ValidationError,
    field_validator,
    model_validator,
)
from sympy import isprime

from src.actions.action import ModuleAlgebraAction
from src.actions.verification import VerificationReport
from src.diffop.operator import apply
from src.diffop.parser import format_operator, parse_operator
from src.field.parser import format_rational, parse_rational
from src.field.rational_function import RationalFunction, function_field
from src.groupscheme.descriptor import (
    Explicit,
    GroupSchemeDescriptor,
    HeightOne,
    KerF2MinusV,
    KerFMinusV,
    Product,
    describe,
    describe_socle,
    dual,
    invariants,
    min_action_dimension,
    necessary_conditions,
    socle,
)
from src.groupscheme.presentation import (
    HopfGenerator,
    HopfPresentation,
    monomial_from_text,
    monomial_to_text,
    polynomial_from_text,
    polynomial_to_text,
)
from src.groupscheme.young import YoungDiagram, young_join
from src.solver.system import DiffSystem
from src.utils.constants import GeneratorKind, VerificationState
from src.utils.errors import MalformedInputError, NotCommutative, ParseError
from src.utils.logging import log_error, log_success
from src.utils.settings import BudgetSettings
from src.utils.utils import save_text_file


def _prime(value: int) -> int:
    if not isprime(value):
        raise ValueError(f"{value} is not a prime")
    return value


Prime = Annotated[int, AfterValidator(_prime)]


# ============================================================================
# Group specs
# ============================================================================


class YoungSpec(BaseModel):
    """HeightOne(rows, mu); an empty row list is the trivial unipotent part."""

    type: Literal["young"] = "young"
    p: Prime
    rows: list[int] = Field(default_factory=list)
    mu: int = Field(default=0, ge=0)

    @field_validator("rows")
    @classmethod
    def rows_must_decrease(cls, v: list[int]) -> list[int]:
        if any(r < 1 for r in v) or any(a < b for a, b in zip(v, v[1:])):
            raise ValueError(f"rows must be positive and weakly decreasing: {v}")
        return v


class KerFVSpec(BaseModel):
    type: Literal["kerFV"] = "kerFV"
    p: Prime
    n: int = Field(..., ge=1)


class KerF2VSpec(BaseModel):
    type: Literal["kerF2V"] = "kerF2V"
    p: Prime


class TailTermSpec(BaseModel):
    """One term c * left (x) right of a comultiplication tail."""

    coefficient: int = 1
    left: str
    right: str


class ExplicitGeneratorSpec(BaseModel):
    """
    A generator T with T^(p^p_exponent) = relation and the given comultiplication tail.

    ## Example (JSON)
    ```json
    {"name": "T1", "level": 2, "p_exponent": 1, "relation": "U0",
     "tail": [{"coefficient": 1, "left": "T0", "right": "T0"}], "verschiebung": "T0"}
    ```
    """

    name: str
    level: int = Field(default=1, ge=1)
    p_exponent: int = Field(default=1, ge=1)
    relation: str = "0"
    tail: list[TailTermSpec] = Field(default_factory=list)
    verschiebung: str = "0"
    kind: Literal["unipotent", "multiplicative"] = "unipotent"

    @field_validator("name")
    @classmethod
    def name_must_be_identifier(cls, v: str) -> str:
        if not v.isidentifier():
            raise ValueError(f"generator name {v!r} is not an identifier")
        return v


class CommutatorSpec(BaseModel):
    left: str
    right: str
    value: str


class PresentationSpec(BaseModel):
    generators: list[ExplicitGeneratorSpec] = Field(default_factory=list)
    commutative: bool = True
    commutators: list[CommutatorSpec] = Field(default_factory=list)

    def to_presentation(self, p: int) -> HopfPresentation:
        names = [g.name for g in self.generators]
        generators = []
        for g in self.generators:
            generators.append(
                HopfGenerator(
                    name=g.name,
                    level=g.level,
                    p_exponent=g.p_exponent,
                    relation_tail=polynomial_from_text(g.relation, names, p),
                    comul_tail=tuple(
                        (
                            t.coefficient % p,
                            monomial_from_text(t.left, names, p),
                            monomial_from_text(t.right, names, p),
                        )
                        for t in g.tail
                    ),
                    verschiebung=polynomial_from_text(g.verschiebung, names, p),
                    kind=GeneratorKind(g.kind),
                )
            )
        commutators = tuple(
            (c.left, c.right, polynomial_from_text(c.value, names, p)) for c in self.commutators
        )
        return HopfPresentation(p, tuple(generators), self.commutative, commutators)

    @classmethod
    def from_presentation(cls, presentation: HopfPresentation) -> PresentationSpec:
        return cls(
            generators=[
                ExplicitGeneratorSpec(
                    name=g.name,
                    level=g.level,
                    p_exponent=g.p_exponent,
                    relation=polynomial_to_text(g.relation_tail),
                    tail=[
                        TailTermSpec(
                            coefficient=c, left=monomial_to_text(a), right=monomial_to_text(b)
                        )
                        for c, a, b in g.comul_tail
                    ],
                    verschiebung=polynomial_to_text(g.verschiebung),
                    kind=g.kind.value,
                )
                for g in presentation.generators
            ],
            commutative=presentation.commutative,
            commutators=[
                CommutatorSpec(left=a, right=b, value=polynomial_to_text(v))
                for a, b, v in presentation.extra_commutators
            ],
        )


class ExplicitSpec(BaseModel):
    """
    A group given by its own presentation ("generators") and optionally its dual.

    An autodual group may omit the dual; a group known only through its dual leaves
    "generators" empty.
    """

    type: Literal["explicit"] = "explicit"
    p: Prime
    name: str = "explicit"
    generators: list[ExplicitGeneratorSpec] = Field(default_factory=list)
    commutative: bool = True
    commutators: list[CommutatorSpec] = Field(default_factory=list)
    dual: Optional[PresentationSpec] = None
    autodual: bool = False

    @model_validator(mode="after")
    def needs_a_presentation(self) -> ExplicitSpec:
        if not self.generators and self.dual is None:
            raise ValueError("an explicit group needs generators or a dual")
        return self


class ProductSpec(BaseModel):
    type: Literal["product"] = "product"
    p: Prime
    factors: list["GroupSpec"] = Field(..., min_length=1)

    @model_validator(mode="after")
    def factors_share_p(self) -> ProductSpec:
        if any(f.p != self.p for f in self.factors):
            raise ValueError("product factors must share the characteristic")
        return self


GroupSpec = Annotated[
    Union[YoungSpec, KerFVSpec, KerF2VSpec, ExplicitSpec, ProductSpec],
    Field(discriminator="type"),
]
ProductSpec.model_rebuild()
GROUP_SPEC_ADAPTER: TypeAdapter[GroupSpec] = TypeAdapter(GroupSpec)


def group_spec_to_descriptor(spec: GroupSpec) -> GroupSchemeDescriptor:
    """Build the descriptor a group spec stands for."""
    if isinstance(spec, YoungSpec):
        diagram = YoungDiagram(tuple(spec.rows)) if spec.rows else None
        return HeightOne(spec.p, diagram, spec.mu)
    if isinstance(spec, KerFVSpec):
        return KerFMinusV(spec.p, spec.n)
    if isinstance(spec, KerF2VSpec):
        return KerF2MinusV(spec.p)
    if isinstance(spec, ExplicitSpec):
        presentation = None
        if spec.generators:
            presentation = PresentationSpec(
                generators=spec.generators,
                commutative=spec.commutative,
                commutators=spec.commutators,
            ).to_presentation(spec.p)
        dual_presentation = spec.dual.to_presentation(spec.p) if spec.dual else None
        return Explicit(spec.p, presentation, dual_presentation, spec.autodual, spec.name)
    return Product(spec.p, tuple(group_spec_to_descriptor(f) for f in spec.factors))


def descriptor_to_group_spec(desc: GroupSchemeDescriptor) -> GroupSpec:
    """The group spec of a descriptor; group_spec_to_descriptor inverts it."""
    if isinstance(desc, HeightOne):
        rows = list(desc.diagram.rows) if desc.diagram else []
        return YoungSpec(p=desc.p, rows=rows, mu=desc.mu_count)
    if isinstance(desc, KerFMinusV):
        return KerFVSpec(p=desc.p, n=desc.n)
    if isinstance(desc, KerF2MinusV):
        return KerF2VSpec(p=desc.p)
    if isinstance(desc, Explicit):
        own = (
            PresentationSpec.from_presentation(desc.presentation)
            if desc.presentation is not None
            else PresentationSpec()
        )
        return ExplicitSpec(
            p=desc.p,
            name=desc.name,
            generators=own.generators,
            commutative=own.commutative,
            commutators=own.commutators,
            dual=(
                PresentationSpec.from_presentation(desc.dual_presentation)
                if desc.dual_presentation is not None
                else None
            ),
            autodual=desc.autodual,
        )
    return ProductSpec(p=desc.p, factors=[descriptor_to_group_spec(f) for f in desc.factors])


# ============================================================================
# JSON helpers
# ============================================================================


def _decode(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno, source) from e


def _validate(validator: Any, data: Any, source: str) -> Any:
    try:
        return validator(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise MalformedInputError(f"{source}: {where}: {first['msg']}") from e


def parse_group_spec(text: str, source: str = "<group>") -> GroupSpec:
    """Parse a group spec from JSON text."""
    return _validate(GROUP_SPEC_ADAPTER.validate_python, _decode(text, source), source)


def _read(filepath: str) -> str:
    path = Path(filepath)
    if not path.is_file():
        log_error(f"File not found: {filepath}")
        raise MalformedInputError(f"File not found: {filepath}")
    return path.read_text(encoding="utf-8")


class JsonFileModel(BaseModel):
    """Shared save/load behaviour of the file models."""

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), ensure_ascii=False, indent=4)

    def save_json(self, filepath: str) -> None:
        """
        Write the model as indented JSON, creating parent directories.

        Raises:
            OSError: If the file cannot be written.
        """
        save_text_file(self.to_json() + "\n", filepath)

    @classmethod
    def from_text(cls, text: str, source: str = "<input>") -> Any:
        return _validate(cls.model_validate, _decode(text, source), source)

    @classmethod
    def load_json(cls, filepath: str) -> Any:
        """
        Load and validate a model from a JSON file.

        Raises:
            MalformedInputError: If the file is missing, not JSON or fails validation.
        """
        model = cls.from_text(_read(filepath), filepath)
        log_success(f"Loaded JSON from: {Path(filepath).resolve()}")
        return model


# ============================================================================
# Actions
# ============================================================================


class ActionFile(JsonFileModel):
    """
    An action as stored on disk.

    ## Example (JSON)
    ```json
    {"p": 2, "variables": ["t"], "group": {"p": 2, "type": "kerFV", "n": 2},
     "assignment": {"T1": "1 * d[t]^[1]", "T2": "1 * d[t]^[2] + (t^2) * d[t]^[1]"}}
    ```
    """

    p: Prime
    variables: list[str] = Field(..., min_length=1)
    group: GroupSpec
    assignment: dict[str, str]
    verified: Literal["unchecked", "passed", "failed"] = "unchecked"

    @model_validator(mode="after")
    def group_matches_p(self) -> ActionFile:
        if self.group.p != self.p:
            raise ValueError(f"group has p = {self.group.p}, action has p = {self.p}")
        return self

    @classmethod
    def from_action(cls, action: ModuleAlgebraAction) -> ActionFile:
        return cls(
            p=action.p,
            variables=list(action.variables),
            group=descriptor_to_group_spec(action.group),
            assignment={name: format_operator(op) for name, op in action.assignment.items()},
            verified=action.verified.value,
        )

    def to_action(self, budget: Optional[BudgetSettings] = None) -> ModuleAlgebraAction:
        """
        Parse every operator and rebuild the action.

        Raises:
            ParseError: If an operator text does not parse.
            InvalidAction: If generators and assignment disagree.
        """
        field = function_field(self.p, tuple(self.variables), budget)
        group = group_spec_to_descriptor(self.group)
        presentation = dual(group, budget)
        assignment = {name: parse_operator(text, field) for name, text in self.assignment.items()}
        return ModuleAlgebraAction(
            field, group, presentation, assignment, VerificationState(self.verified)
        )


# ============================================================================
# Systems
# ============================================================================


class SystemRecord(BaseModel):
    """
    One equation D(x) = rhs with D^(p^order_exponent) = reduction(D_1, ..., D_m).

    The reduction is a polynomial text in X1, ..., Xm standing for the system's operators.
    """

    operator: str
    rhs: str
    order_exponent: int = Field(default=1, ge=1)
    reduction: str = "0"


class SystemFile(JsonFileModel):
    p: Prime
    variables: list[str] = Field(..., min_length=1)
    equations: list[SystemRecord] = Field(default_factory=list)
    level: Optional[int] = Field(default=None, ge=1)

    def to_system(self, budget: Optional[BudgetSettings] = None) -> DiffSystem:
        field = function_field(self.p, tuple(self.variables), budget)
        names = [f"X{i}" for i in range(1, len(self.equations) + 1)]
        reductions = []
        for record in self.equations:
            reduction: dict[tuple[int, ...], int] = {}
            for coeff, mono in polynomial_from_text(record.reduction, names, self.p):
                exponents = [0] * len(names)
                for name, e in mono:
                    exponents[names.index(name)] = e
                reduction[tuple(exponents)] = coeff
            reductions.append(reduction)
        return DiffSystem(
            field,
            tuple(parse_operator(r.operator, field) for r in self.equations),
            tuple(parse_rational(r.rhs, field) for r in self.equations),
            tuple(r.order_exponent for r in self.equations),
            tuple(reductions),
        )


# ============================================================================
# Reports
# ============================================================================


class CheckRecord(BaseModel):
    kind: str
    subject: str
    passed: bool
    witness: Optional[str] = None


class VerificationReportModel(JsonFileModel):
    status: Literal["pass", "fail"]
    test_level: int
    faithful: Optional[bool] = None
    generically_free: Optional[bool] = None
    checks: list[CheckRecord] = Field(default_factory=list)

    @classmethod
    def from_report(cls, report: VerificationReport) -> VerificationReportModel:
        return cls(
            status="pass" if report.passed else "fail",
            test_level=report.test_level,
            faithful=report.faithful,
            generically_free=report.generically_free,
            checks=[
                CheckRecord(
                    kind=c.kind.value, subject=c.subject, passed=c.passed, witness=c.witness
                )
                for c in report.checks
            ],
        )

    def summary_lines(self) -> list[str]:
        failed = [c for c in self.checks if not c.passed]
        lines = [
            f"status: {self.status}",
            f"checks: {len(self.checks) - len(failed)} passed, {len(failed)} failed",
            f"test level: {self.test_level}",
            f"faithful: {_tri(self.faithful)}",
            f"generically free: {_tri(self.generically_free)}",
        ]
        for check in failed:
            lines.append(f"FAILED {check.kind}: {check.subject} ({check.witness})")
        return lines


def _tri(value: Optional[bool]) -> str:
    return "undecided" if value is None else str(value).lower()


class SolveResultModel(JsonFileModel):
    status: Literal["solved", "incompatible"]
    solution: Optional[str] = None
    checks: list[CheckRecord] = Field(default_factory=list)

    @classmethod
    def solved(cls, system: DiffSystem, x: RationalFunction) -> SolveResultModel:
        checks = []
        for i, (op, a) in enumerate(zip(system.operators, system.rhs), start=1):
            checks.append(
                CheckRecord(kind="equation", subject=f"D{i}(x) = a{i}", passed=apply(op, x) == a)
            )
        return cls(status="solved", solution=format_rational(x), checks=checks)


class NecessaryCondition(BaseModel):
    dimension: int
    holds: bool


class GroupInfo(JsonFileModel):
    description: str
    p: Prime
    lie_dim: int
    socle: Optional[str]
    frobenius_height: int
    verschiebung_index: int
    order: str
    commutative: bool
    min_action_dimension: int
    necessary_conditions: list[NecessaryCondition]
    relations: list[str] = Field(default_factory=list)

    @classmethod
    def from_descriptor(
        cls, desc: GroupSchemeDescriptor, budget: Optional[BudgetSettings] = None
    ) -> GroupInfo:
        info = invariants(desc, budget)
        try:
            socle_text: Optional[str] = describe_socle(socle(desc))
        except NotCommutative:
            socle_text = None
        try:
            relations = dual(desc, budget).describe_relations()
        except MalformedInputError:
            relations = []
        return cls(
            description=describe(desc),
            p=desc.p,
            lie_dim=info.lie_dim,
            socle=socle_text,
            frobenius_height=info.frobenius_height,
            verschiebung_index=info.verschiebung_index,
            order=info.order_text(),
            commutative=info.commutative,
            min_action_dimension=min_action_dimension(desc),
            necessary_conditions=[
                NecessaryCondition(dimension=n, holds=holds)
                for n, holds in sorted(necessary_conditions(desc).items())
            ],
            relations=relations,
        )

    def summary_lines(self) -> list[str]:
        lines = [
            f"group: {self.description}",
            f"p: {self.p}",
            f"order: {self.order}",
            f"commutative: {str(self.commutative).lower()}",
            f"lie_dim: {self.lie_dim}",
            f"socle: {self.socle if self.socle is not None else 'n/a'}",
            f"frobenius height: {self.frobenius_height}",
            f"verschiebung index: {self.verschiebung_index}",
            f"min action dimension: {self.min_action_dimension}",
        ]
        lines.extend(
            f"dimension {c.dimension}: necessary condition {'holds' if c.holds else 'fails'}"
            for c in self.necessary_conditions
        )
        lines.extend(f"  {relation}" for relation in self.relations)
        return lines


class SocleResult(JsonFileModel):
    description: str
    socle: str
    alpha_rank: int
    mu_count: int

    @classmethod
    def from_descriptor(cls, desc: GroupSchemeDescriptor) -> SocleResult:
        """
        Raises:
            NotCommutative: For non-commutative groups.
        """
        result = socle(desc)
        return cls(
            description=describe(desc),
            socle=describe_socle(result),
            alpha_rank=result.diagram.first_column if result.diagram else 0,
            mu_count=result.mu_count,
        )

    def summary_lines(self) -> list[str]:
        return [self.socle]


class YoungJoinResult(JsonFileModel):
    diagrams: list[list[int]]
    join: list[int]

    @classmethod
    def from_diagrams(cls, diagrams: list[YoungDiagram]) -> YoungJoinResult:
        joined = young_join(diagrams)
        return cls(diagrams=[list(d.rows) for d in diagrams], join=list(joined.rows))

    def summary_lines(self) -> list[str]:
        return [",".join(str(r) for r in self.join)]
