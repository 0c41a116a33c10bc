"""
Exact linear algebra over F_p[x_1, ..., x_n] and its fraction field.

FractionFreeEliminator runs Bareiss elimination: every entry stays a polynomial, and
each update

    a_ij <- (a_rc * a_ij - a_ic * a_rj) / previous_pivot

divides exactly. Pivots are the first nonzero entry of the current column in row order,
so results are reproducible. Rows with rational entries are cleared of denominators
one row at a time before elimination.
"""

from __future__ import annotations

from functools import reduce
from typing import Optional, Sequence

from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement

from src.field.rational_function import FunctionField, RationalFunction
from src.utils.errors import InvalidSystem


def clear_denominators(
    field: FunctionField, row: Sequence[RationalFunction]
) -> list[PolyElement]:
    """Multiply a row by the lcm of its denominators."""
    common = reduce(lambda acc, f: acc.lcm(f.denominator), row, field.ring.one)
    return [f.numerator * common.exquo(f.denominator) for f in row]


class FractionFreeEliminator:
    """
    Row echelon form of a polynomial matrix, optionally augmented by a right-hand side.

    Args:
        field: The function field whose polynomial ring holds the entries.
        rows: Matrix rows; with augmented=True the last column is the right-hand side.
        augmented: Whether the last column is a right-hand side.
    """

    def __init__(
        self,
        field: FunctionField,
        rows: Sequence[Sequence[PolyElement]],
        augmented: bool = False,
    ) -> None:
        widths = {len(row) for row in rows}
        if len(widths) > 1:
            raise InvalidSystem("matrix rows of different lengths")
        self.field = field
        self.augmented = augmented
        self.width = widths.pop() if widths else 0
        self.columns = self.width - 1 if augmented else self.width
        self.rows = [list(row) for row in rows]
        self.pivots: list[int] = []
        self.inconsistent = False
        self._eliminate()

    @classmethod
    def from_rational_rows(
        cls,
        field: FunctionField,
        rows: Sequence[Sequence[RationalFunction]],
        augmented: bool = False,
    ) -> FractionFreeEliminator:
        return cls(field, [clear_denominators(field, row) for row in rows], augmented)

    def _eliminate(self) -> None:
        rows = self.rows
        previous = self.field.ring.one
        rank = 0
        for column in range(self.width):
            pivot = next((i for i in range(rank, len(rows)) if rows[i][column]), None)
            if pivot is None:
                continue
            if self.augmented and column == self.columns:
                self.inconsistent = True
                break
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            head = rows[rank][column]
            for i in range(rank + 1, len(rows)):
                factor = rows[i][column]
                for j in range(column + 1, self.width):
                    rows[i][j] = (head * rows[i][j] - factor * rows[rank][j]).exquo(previous)
                rows[i][column] = self.field.ring.zero
            previous = head
            self.pivots.append(column)
            rank += 1

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def free_columns(self) -> list[int]:
        return [c for c in range(self.columns) if c not in self.pivots]

    def _back_substitute(
        self, rhs: list[RationalFunction], free_values: dict[int, RationalFunction]
    ) -> list[RationalFunction]:
        field = self.field
        solution: list[RationalFunction] = [field.zero] * self.columns
        for column, value in free_values.items():
            solution[column] = value
        for r in reversed(range(self.rank)):
            column = self.pivots[r]
            row = self.rows[r]
            total = rhs[r]
            for j in range(column + 1, self.columns):
                if row[j] and not solution[j].is_zero:
                    total = total - field.from_polynomial(row[j]) * solution[j]
            solution[column] = total / field.from_polynomial(row[column])
        return solution

    def solve(self) -> Optional[list[RationalFunction]]:
        """
        A particular solution with every free coordinate set to zero.

        Returns:
            The solution vector, or None if the system is inconsistent.
        """
        if not self.augmented:
            raise InvalidSystem("solve() needs an augmented matrix")
        if self.inconsistent:
            return None
        rhs = [self.field.from_polynomial(self.rows[r][self.columns]) for r in range(self.rank)]
        return self._back_substitute(rhs, {})

    def nullspace(self) -> list[list[RationalFunction]]:
        """A basis of the kernel, one vector per free column."""
        zero_rhs = [self.field.zero] * self.rank
        return [
            self._back_substitute(zero_rhs, {column: self.field.one})
            for column in self.free_columns
        ]


def rank_over_field(field: FunctionField, rows: Sequence[Sequence[RationalFunction]]) -> int:
    """Rank over K of a matrix of rational functions."""
    if not rows:
        return 0
    return FractionFreeEliminator.from_rational_rows(field, rows).rank


def rank_over_prime_field(p: int, rows: Sequence[Sequence[int]]) -> int:
    """Rank over F_p of an integer matrix."""
    if not rows or not rows[0]:
        return 0
    domain = GF(p)
    matrix = DomainMatrix(
        [[domain(value % p) for value in row] for row in rows], (len(rows), len(rows[0])), domain
    )
    return matrix.rank()


def prime_field_rows(
    field: FunctionField, vectors: Sequence[Sequence[RationalFunction]]
) -> list[list[int]]:
    """
    Flatten vectors over K into F_p-coordinate rows.

    All entries are brought to one common denominator; each numerator is then read off
    in the monomial basis. Two vectors are F_p-dependent iff their rows are.
    """
    entries = [f for vector in vectors for f in vector]
    common = reduce(lambda acc, f: acc.lcm(f.denominator), entries, field.ring.one)
    keys: dict[tuple[int, tuple[int, ...]], int] = {}
    numerators = []
    for vector in vectors:
        flattened: dict[tuple[int, tuple[int, ...]], int] = {}
        for position, f in enumerate(vector):
            numerator = f.numerator * common.exquo(f.denominator)
            for monom, coeff in numerator.items():
                key = (position, monom)
                keys.setdefault(key, len(keys))
                flattened[key] = int(coeff) % field.p
        numerators.append(flattened)
    return [[row.get(key, 0) for key in keys] for row in numerators]
