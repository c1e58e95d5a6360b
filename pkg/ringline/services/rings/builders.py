"""
Ringline - Ring Builders
Turns a RingSpec into a validated RingTable with a canonical element order
"""

import logging
from functools import lru_cache
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ...core.config import settings
from ...core.exceptions import CapExceededError, InvalidParameterError
from ...schemas.ringspec import (
    DualNumbers,
    ExteriorAlgebra,
    GaloisField,
    MatrixRing,
    Product,
    RingSpec,
    TableRing,
    TwistedDual,
    Zmod,
)
from ...utils.helpers import product
from .galois import frobenius_power_map, galois_tables
from .table import RingTable, make_ring, read_table_ring, table_ring_order

logger = logging.getLogger(__name__)

# basis product rule: (i, j) -> (k, sign) or None for a zero product
BasisRule = Callable[[int, int], Optional[Tuple[int, int]]]


def spec_order(spec: RingSpec) -> int:
    """Order of the ring a spec describes, computed without building it."""
    if isinstance(spec, Zmod):
        return spec.m
    if isinstance(spec, GaloisField):
        return spec.q
    if isinstance(spec, DualNumbers):
        return spec_order(spec.base) ** spec.h
    if isinstance(spec, TwistedDual):
        return spec_order(spec.base) ** 2
    if isinstance(spec, MatrixRing):
        return spec_order(spec.base) ** (spec.m * spec.m)
    if isinstance(spec, Product):
        return product(spec_order(f) for f in spec.factors)
    if isinstance(spec, ExteriorAlgebra):
        return spec_order(spec.base) ** (2 ** spec.n)
    if isinstance(spec, TableRing):
        return table_ring_order(spec.path)
    raise InvalidParameterError(f"unknown ring spec {spec!r}")


def build_ring(spec: RingSpec, cap: Optional[int] = None) -> RingTable:
    """Build and validate the ring named by spec.

    Identical specs give identical tables; built rings are memoized.
    """
    cap = settings.cap if cap is None else cap
    order = spec_order(spec)
    if order > cap:
        raise CapExceededError(f"{spec.text()} has order {order}, above the cap {cap}")
    return _build(spec)


@lru_cache(maxsize=64)
def _build(spec: RingSpec) -> RingTable:
    name = spec.text()
    if isinstance(spec, Zmod):
        idx = np.arange(spec.m)
        ring = make_ring((idx[:, None] + idx[None, :]) % spec.m, (idx[:, None] * idx[None, :]) % spec.m, name=name)
    elif isinstance(spec, GaloisField):
        add, mul, labels = galois_tables(spec.q)
        ring = make_ring(add, mul, labels, name=name)
    elif isinstance(spec, DualNumbers):
        base = _build(spec.base)
        h = spec.h
        basis = [""] + ["e" if i == 1 else f"e^{i}" for i in range(1, h)]
        ring = _monomial_algebra(base, basis, lambda i, j: (i + j, 1) if i + j < h else None, None, name)
    elif isinstance(spec, TwistedDual):
        base = _build(spec.base)
        sigma = frobenius_power_map(base.mul, base.one_index, base.char, spec.frobenius_power)
        rule = {(0, 0): (0, 1), (0, 1): (1, 1), (1, 0): (1, 1)}
        ring = _monomial_algebra(base, ["", "e"], lambda i, j: rule.get((i, j)), [None, sigma], name)
    elif isinstance(spec, ExteriorAlgebra):
        ring = _exterior(_build(spec.base), spec.n, name)
    elif isinstance(spec, MatrixRing):
        ring = _matrix_ring(_build(spec.base), spec.m, name)
    elif isinstance(spec, Product):
        ring = _product([_build(f) for f in spec.factors], name)
    elif isinstance(spec, TableRing):
        ring = read_table_ring(spec.path)
    else:
        raise InvalidParameterError(f"unknown ring spec {spec!r}")
    logger.info("Built %s: order %d, %d units, radical of size %d",
                name, ring.order, int(ring.unit_mask.sum()), int(ring.radical_mask.sum()))
    return ring


def _coordinates(order: int, radices: Sequence[int]) -> Tuple[List[np.ndarray], List[int]]:
    """Mixed-radix digits of every element index, first coordinate most significant."""
    weights = [product(radices[i + 1:]) for i in range(len(radices))]
    idx = np.arange(order)
    return [(idx // w) % r for w, r in zip(weights, radices)], weights


def _structure_tables(
    base: RingTable,
    dim: int,
    rule: BasisRule,
    twists: Optional[Sequence[Optional[np.ndarray]]] = None,
) -> Tuple[np.ndarray, np.ndarray, List[np.ndarray], List[int]]:
    """Tables of a free base-module with basis products e_i e_j = sign * e_k.

    ``twists[i]`` moves a coefficient past e_i: e_i b = twists[i](b) e_i.
    """
    nb = base.order
    order = nb ** dim
    coords, weights = _coordinates(order, [nb] * dim)
    add = np.zeros((order, order), dtype=np.int64)
    for c, w in zip(coords, weights):
        add += base.add[c[:, None], c[None, :]] * w
    acc = [np.full((order, order), base.zero_index, dtype=np.int64) for _ in range(dim)]
    for i in range(dim):
        moved = twists[i] if twists is not None and twists[i] is not None else None
        for j in range(dim):
            hit = rule(i, j)
            if hit is None:
                continue
            k, sign = hit
            right = coords[j] if moved is None else moved[coords[j]]
            term = base.mul[coords[i][:, None], right[None, :]]
            if sign < 0:
                term = base.neg[term]
            acc[k] = base.add[acc[k], term]
    mul = np.zeros((order, order), dtype=np.int64)
    for k in range(dim):
        mul += acc[k] * weights[k]
    return add, mul, coords, weights


def _coefficient(base: RingTable, c: int) -> str:
    text = base.labels[c]
    return f"({text})" if any(ch in text for ch in "+-") else text


def _monomial_algebra(
    base: RingTable,
    basis: Sequence[str],
    rule: BasisRule,
    twists: Optional[Sequence[Optional[np.ndarray]]],
    name: str,
) -> RingTable:
    add, mul, coords, weights = _structure_tables(base, len(basis), rule, twists)
    labels = []
    for e in range(add.shape[0]):
        terms = []
        for c, b in zip(coords, basis):
            x = int(c[e])
            if x == base.zero_index:
                continue
            if not b:
                terms.append(base.labels[x])
            else:
                terms.append(b if x == base.one_index else f"{_coefficient(base, x)}{b}")
        labels.append("+".join(terms) or base.labels[base.zero_index])
    constants = None
    if base.is_field:
        zero_tail = sum(base.zero_index * w for w in weights[1:])
        constants = (base, np.arange(base.order) * weights[0] + zero_tail)
    return make_ring(add, mul, labels, name=name, coefficients=constants)


def _exterior(base: RingTable, n: int, name: str) -> RingTable:
    if not base.is_commutative:
        raise InvalidParameterError("an exterior algebra needs a commutative base ring")
    subsets = sorted((s for r in range(n + 1) for s in combinations(range(1, n + 1), r)), key=lambda s: (len(s), s))
    position = {s: i for i, s in enumerate(subsets)}

    def wedge(i: int, j: int) -> Optional[Tuple[int, int]]:
        left, right = subsets[i], subsets[j]
        if set(left) & set(right):
            return None
        inversions = sum(1 for x in left for y in right if x > y)
        return position[tuple(sorted(left + right))], (-1) ** inversions

    basis = ["".join(f"b{x}" for x in s) for s in subsets]
    return _monomial_algebra(base, basis, wedge, None, name)


def _matrix_ring(base: RingTable, m: int, name: str) -> RingTable:
    cells = [(r, c) for r in range(m) for c in range(m)]

    def unit_product(i: int, j: int) -> Optional[Tuple[int, int]]:
        (r, k1), (k2, c) = cells[i], cells[j]
        return (r * m + c, 1) if k1 == k2 else None

    add, mul, coords, weights = _structure_tables(base, m * m, unit_product)
    labels = []
    for e in range(add.shape[0]):
        entries = [base.labels[int(coords[r * m + c][e])] for r, c in cells]
        rows = ["[" + ",".join(entries[r * m:(r + 1) * m]) + "]" for r in range(m)]
        labels.append("[" + ",".join(rows) + "]")
    constants = None
    if base.is_field:
        diagonal = [r * m + r for r in range(m)]
        scalar = sum(weights[i] for i in diagonal)
        rest = sum(base.zero_index * weights[i] for i in range(m * m) if i not in diagonal)
        constants = (base, np.arange(base.order) * scalar + rest)
    return make_ring(add, mul, labels, name=name, coefficients=constants)


def _product(factors: Sequence[RingTable], name: str) -> RingTable:
    radices = [f.order for f in factors]
    order = product(radices)
    coords, weights = _coordinates(order, radices)
    add = np.zeros((order, order), dtype=np.int64)
    mul = np.zeros((order, order), dtype=np.int64)
    for f, c, w in zip(factors, coords, weights):
        add += f.add[c[:, None], c[None, :]] * w
        mul += f.mul[c[:, None], c[None, :]] * w
    labels = [
        "(" + ",".join(f.labels[int(c[e])] for f, c in zip(factors, coords)) + ")"
        for e in range(order)
    ]
    return make_ring(add, mul, labels, name=name)
