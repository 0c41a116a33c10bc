"""Binomial coefficients mod p via Lucas' theorem."""

from functools import lru_cache
from math import comb


@lru_cache(maxsize=None)
def lucas_binomial(n: int, k: int, p: int) -> int:
    """
    Return C(n, k) mod p.

    Example:
        >>> lucas_binomial(4, 2, 2)
        0
        >>> lucas_binomial(5, 1, 2)
        1
    """
    if k < 0 or k > n:
        return 0
    result = 1
    while n or k:
        n_digit, k_digit = n % p, k % p
        if k_digit > n_digit:
            return 0
        result = result * comb(n_digit, k_digit) % p
        n //= p
        k //= p
    return result


def multi_binomial(top: tuple[int, ...], bottom: tuple[int, ...], p: int) -> int:
    """Product of lucas_binomial over the components."""
    result = 1
    for n, k in zip(top, bottom):
        result = result * lucas_binomial(n, k, p) % p
        if not result:
            return 0
    return result
