"""
Young diagrams of commutative unipotent height-one group schemes.

A diagram with rows n_1 >= ... >= n_s stands for the product of the Frobenius kernels
of the Witt groups W_{n_i}. Its first column has s boxes and its first row n_1 boxes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from src.utils.errors import InvalidDescriptor, ParseError


@dataclass(frozen=True)
class YoungDiagram:
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise InvalidDescriptor("a Young diagram needs at least one row")
        if any(r < 1 for r in self.rows):
            raise InvalidDescriptor(f"rows must be positive: {self.rows}")
        if any(a < b for a, b in zip(self.rows, self.rows[1:])):
            raise InvalidDescriptor(f"rows must be weakly decreasing: {self.rows}")

    @property
    def boxes(self) -> int:
        return sum(self.rows)

    @property
    def first_column(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return self.rows[0]

    def column(self, j: int) -> int:
        """Number of rows with at least j boxes (1-based j)."""
        return sum(1 for r in self.rows if r >= j)

    def __str__(self) -> str:
        return ",".join(str(r) for r in self.rows)

    @classmethod
    def parse(cls, text: str) -> YoungDiagram:
        """Parse "3,1" or "(3, 1)"."""
        body = text.strip().strip("()")
        try:
            rows = tuple(int(part) for part in body.split(",") if part.strip())
        except ValueError as e:
            raise ParseError(f"invalid Young diagram {text!r}") from e
        return cls(rows)


def young_join(diagrams: Iterable[YoungDiagram]) -> YoungDiagram:
    """
    Row-wise maximum of diagrams (missing rows count as 0).

    Example:
        >>> young_join([YoungDiagram((3, 1)), YoungDiagram((2, 2))]).rows
        (3, 2)
    """
    diagrams = list(diagrams)
    if not diagrams:
        raise InvalidDescriptor("young_join needs at least one diagram")
    depth = max(d.first_column for d in diagrams)
    rows = tuple(
        max((d.rows[i] if i < d.first_column else 0) for d in diagrams) for i in range(depth)
    )
    return YoungDiagram(rows)


def necessary_condition(diagram: YoungDiagram | None, mu_count: int, n: int) -> bool:
    """
    Necessary condition for a generically free action on n variables.

    It reads s <= n and n_1 <= n - s, where s is the number of mu_p factors of the
    Frobenius kernel and n_1 the first row of its unipotent diagram.
    """
    if mu_count > n:
        return False
    if diagram is None:
        return True
    return diagram.width <= n - mu_count
