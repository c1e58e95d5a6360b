"""
Ringline - Galois Fields
GF(p^n) as GF(p)[t]/(f) with f the least monic irreducible of degree n
"""

import logging
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from ...core.exceptions import InvalidParameterError
from ...utils.helpers import prime_power

logger = logging.getLogger(__name__)

Poly = List[int]  # coefficients, lowest degree first


def _trim(a: Poly) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> Poly:
    """Remainder of a modulo the monic polynomial f over GF(p)."""
    a = _trim(a)
    f = _trim(f)
    deg = len(f) - 1
    while len(a) - 1 >= deg and a:
        lead = a[-1]
        shift = len(a) - 1 - deg
        for i, c in enumerate(f):
            a[shift + i] = (a[shift + i] - lead * c) % p
        a = _trim(a)
    return a


def poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> Poly:
    prod = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return poly_mod(prod, f, p)


def _digits(k: int, p: int, n: int) -> Poly:
    return [(k // p ** i) % p for i in range(n)]


def is_irreducible(f: Sequence[int], p: int) -> bool:
    n = len(_trim(f)) - 1
    for d in range(1, n // 2 + 1):
        for k in range(p ** d):
            g = _digits(k, p, d) + [1]
            if not poly_mod(f, g, p):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, n: int) -> Tuple[int, ...]:
    """Lexicographically least monic irreducible of degree n over GF(p).

    Candidates are ordered by their coefficient vectors read as base-p
    integers, highest non-leading coefficient most significant.
    """
    for k in range(p ** n):
        f = _digits(k, p, n) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise InvalidParameterError(f"no irreducible polynomial of degree {n} over GF({p})")


def _label(digits: Sequence[int]) -> str:
    terms = []
    for i in reversed(range(len(digits))):
        c = digits[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            power = "t" if i == 1 else f"t^{i}"
            terms.append(power if c == 1 else f"{c}{power}")
    return "+".join(terms) or "0"


def galois_tables(q: int) -> Tuple[np.ndarray, np.ndarray, List[str]]:
    """Addition table, multiplication table and labels of GF(q).

    Element k has coefficient vector digits of k in base p (constant term
    least significant).
    """
    pp = prime_power(q)
    if pp is None:
        raise InvalidParameterError(f"GF({q}): {q} is not a prime power")
    p, n = pp
    idx = np.arange(q)
    if n == 1:
        return (idx[:, None] + idx[None, :]) % p, (idx[:, None] * idx[None, :]) % p, [str(k) for k in range(q)]

    f = least_irreducible(p, n)
    digits = (idx[:, None] // p ** np.arange(n)[None, :]) % p
    add = np.zeros((q, q), dtype=np.int64)
    for i in range(n):
        add += ((digits[:, i][:, None] + digits[:, i][None, :]) % p) * p ** i

    def encode(poly: Poly) -> int:
        return sum(c * p ** i for i, c in enumerate(poly))

    # exp/log tables from the first primitive element in index order
    for g in range(1, q):
        powers, x = [1], _digits(1, p, n)
        gd = _digits(g, p, n)
        while True:
            x = poly_mulmod(x, gd, f, p)
            k = encode(x)
            if k == 1:
                break
            powers.append(k)
        if len(powers) == q - 1:
            break
    exp = np.array(powers, dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    log[exp] = np.arange(q - 1)
    mul = exp[(log[:, None] + log[None, :]) % (q - 1)]
    mul[0, :] = 0
    mul[:, 0] = 0
    logger.debug("GF(%d) built modulo %s with generator %d", q, f, g)
    return add, mul, [_label(_digits(k, p, n)) for k in range(q)]


def frobenius_power_map(mul: np.ndarray, one: int, p: int, j: int) -> np.ndarray:
    """Table of x -> x^(p^j) computed from a multiplication table."""
    x = np.arange(mul.shape[0])
    y = x.copy()
    for _ in range(j):
        z = np.full_like(y, one)
        for _ in range(p):
            z = mul[z, y]
        y = z
    return y
