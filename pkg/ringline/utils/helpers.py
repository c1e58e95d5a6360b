"""
Ringline - Arithmetic Helpers
Exact integer and rational helpers shared by the services
"""

from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Tuple


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> Optional[Tuple[int, int]]:
    """Return (p, n) with q = p**n, or None when q is not a prime power."""
    if q < 2:
        return None
    p = 2
    while q % p:
        p += 1
    n, rest = 0, q
    while rest % p == 0:
        rest //= p
        n += 1
    return (p, n) if rest == 1 else None


def integer_log(value: int, base: int) -> Optional[int]:
    """Exact e with base**e == value, else None."""
    e, x = 0, 1
    while x < value:
        x *= base
        e += 1
    return e if x == value else None


def transversal_count(classes: int, s: int, t: int) -> int:
    """Number of class-transversal t-subsets with `classes` classes of size s."""
    return comb(classes, t) * s ** t


def as_integer(value: Fraction) -> Optional[int]:
    return value.numerator if value.denominator == 1 else None


def product(values: Iterable[int]) -> int:
    result = 1
    for value in values:
        result *= value
    return result
