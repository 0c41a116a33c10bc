"""
Witt vector addition polynomials.

The addition law of length-n Witt vectors is given by polynomials S_0, ..., S_{n-1} in
X_0..X_{n-1}, Y_0..Y_{n-1}. They are found over the integers from the ghost
components w_i(Z) = sum_j p^j Z_j^(p^(i-j)) by solving

    w_i(S_0, ..., S_i) = w_i(X) + w_i(Y)

for S_i, then reduced mod p. The tails S_i - X_i - Y_i give the comultiplication of
the coordinate ring of Witt groups and of the Frobenius kernels built from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from sympy.polys.domains import GF, ZZ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from src.utils.errors import HeightBudgetExceeded, InvalidDescriptor
from src.utils.logging import log_data_processing
from src.utils.settings import BudgetSettings, resolve

Monomial = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class WittSumData:
    """Addition polynomials S_0..S_{length-1} over GF(p)."""

    p: int
    length: int
    ring: PolyRing
    polys: tuple[PolyElement, ...]

    def x(self, i: int) -> PolyElement:
        return self.ring.gens[i]

    def y(self, i: int) -> PolyElement:
        return self.ring.gens[self.length + i]


def _witt_names(n: int) -> list[str]:
    return [f"X{i}" for i in range(n)] + [f"Y{i}" for i in range(n)]


@lru_cache(maxsize=None)
def _witt_sum(p: int, n: int) -> WittSumData:
    names = _witt_names(n)
    integral = PolyRing(names, ZZ, lex)
    xs, ys = integral.gens[:n], integral.gens[n:]

    def ghost(i: int, zs: Sequence[PolyElement]) -> PolyElement:
        return sum((p**j * zs[j] ** (p ** (i - j)) for j in range(i + 1)), integral.zero)

    sums: list[PolyElement] = []
    for i in range(n):
        remainder = ghost(i, xs) + ghost(i, ys) - sum(
            (p**j * sums[j] ** (p ** (i - j)) for j in range(i)), integral.zero
        )
        divisor = p**i
        terms = {}
        for monom, coeff in remainder.items():
            quotient, rest = divmod(int(coeff), divisor)
            if rest:
                raise InvalidDescriptor(f"Witt identity not divisible by {divisor}")
            terms[monom] = quotient
        sums.append(integral.from_dict(terms))

    modular = PolyRing(names, GF(p), lex)
    reduced = tuple(
        modular.from_dict({monom: int(coeff) % p for monom, coeff in s.items()}) for s in sums
    )
    log_data_processing("witt_sum_polynomials", f"p={p}, n={n}")
    return WittSumData(p, n, modular, reduced)


def witt_sum_polynomials(
    p: int, n: int, budget: Optional[BudgetSettings] = None
) -> WittSumData:
    """
    Addition polynomials of length-n Witt vectors mod p.

    Raises:
        HeightBudgetExceeded: If n exceeds the height budget.
    """
    settings = resolve(budget)
    if n < 1 or n > settings.height_budget:
        raise HeightBudgetExceeded(f"Witt length {n} outside 1..{settings.height_budget}")
    return _witt_sum(p, n)


def _evaluate(polynomial: PolyElement, values: Sequence[int], p: int) -> int:
    total = 0
    for monom, coeff in polynomial.items():
        term = int(coeff)
        for value, e in zip(values, monom):
            term *= pow(value, e, p)
        total += term
    return total % p


def witt_add(p: int, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    """Add two Witt vectors with entries in F_p."""
    if len(x) != len(y):
        raise InvalidDescriptor("Witt vectors of different lengths")
    data = _witt_sum(p, len(x))
    values = [v % p for v in x] + [v % p for v in y]
    return tuple(_evaluate(s, values, p) for s in data.polys)


def witt_tail(
    data: WittSumData, i: int, names: Sequence[str]
) -> tuple[tuple[int, Monomial, Monomial], ...]:
    """
    Comultiplication tail of the i-th Witt coordinate.

    The polynomial S_i - X_i - Y_i is split into terms c * A(X) * B(Y), and X_j, Y_j
    are renamed to names[j]. Returns (c, A, B) with monomials as ((name, exponent), ...).
    """
    tail = data.polys[i] - data.x(i) - data.y(i)
    n = data.length
    terms = []
    for monom, coeff in tail.terms():
        left = tuple((names[j], monom[j]) for j in range(n) if monom[j])
        right = tuple((names[j], monom[n + j]) for j in range(n) if monom[n + j])
        terms.append((int(coeff) % data.p, left, right))
    return tuple(terms)
