"""
Ringline - Ring Structure
Units, Jacobson radical, locality, the quotient by the radical and the
Wedderburn-Artin signature of a semisimple quotient
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from ...core.exceptions import InternalConsistencyError, InvalidParameterError
from ...utils.helpers import integer_log
from .table import RingHom, RingTable, make_ring, radical_of, unit_and_inverse

logger = logging.getLogger(__name__)


def units_of(ring: RingTable) -> frozenset:
    mask, _ = unit_and_inverse(ring.mul, ring.one_index)
    return frozenset(int(u) for u in np.flatnonzero(mask))


def jacobson_radical(ring: RingTable) -> frozenset:
    """{ b : 1 - ab is a unit for all a }"""
    mask, _ = unit_and_inverse(ring.mul, ring.one_index)
    rad = radical_of(ring.add, ring.mul, ring.neg, ring.one_index, mask)
    return frozenset(int(r) for r in np.flatnonzero(rad))


def is_local(ring: RingTable) -> bool:
    """True iff the non-units form an ideal."""
    nonunits = np.flatnonzero(~ring.unit_mask)
    closed_add = (~ring.unit_mask[ring.add[np.ix_(nonunits, nonunits)]]).all()
    absorbing = (~ring.unit_mask[ring.mul[:, nonunits]]).all() and (~ring.unit_mask[ring.mul[nonunits, :]]).all()
    local = bool(closed_add and absorbing)
    if local != ring.is_local:
        raise InternalConsistencyError(f"{ring.name}: locality disagrees with the radical count")
    return local


def is_dedekind_finite(ring: RingTable) -> bool:
    """ab = 1 implies ba = 1 across the whole table."""
    right = ring.mul == ring.one_index
    return bool(np.array_equal(right, right.T))


def center_of(ring: RingTable) -> Tuple[int, ...]:
    return tuple(int(z) for z in np.flatnonzero((ring.mul == ring.mul.T).all(axis=1)))


def _ideal_product(ring: RingTable, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Additive closure of { ab : a in left, b in right } as a sorted index array."""
    products = set(int(x) for x in np.unique(ring.mul[np.ix_(left, right)]))
    closure = {ring.zero_index} | products
    frontier = list(closure)
    while frontier:
        fresh = set(int(x) for x in np.unique(ring.add[np.ix_(frontier, sorted(products))])) - closure
        closure |= fresh
        frontier = sorted(fresh)
    return np.array(sorted(closure))


def nilpotency_index(ring: RingTable) -> int:
    """Least n with (rad R)^n = {0}."""
    rad = np.flatnonzero(ring.radical_mask)
    power, n = rad, 1
    while power.size > 1:
        power = _ideal_product(ring, power, rad)
        n += 1
        if n > rad.size + 1:
            raise InternalConsistencyError(f"{ring.name}: radical is not nilpotent")
    return n


def quotient_by_radical(ring: RingTable) -> Tuple[RingTable, RingHom]:
    """R/rad R with the canonical epimorphism.

    Cosets are represented by their least element; their labels are those
    of the representatives.
    """
    rad = np.flatnonzero(ring.radical_mask)
    least = ring.add[:, rad].min(axis=1)
    reps = np.unique(least)
    coset = np.searchsorted(reps, least)
    add = coset[ring.add[np.ix_(reps, reps)]]
    mul = coset[ring.mul[np.ix_(reps, reps)]]
    quotient = make_ring(add, mul, [ring.labels[r] for r in reps], name=f"{ring.name}/rad")
    hom = RingHom(ring, quotient, coset)
    if not hom.is_homomorphism() or hom.kernel() != ring.radical:
        raise InternalConsistencyError(f"{ring.name}: quotient map is not the canonical epimorphism")
    if quotient.radical != frozenset({quotient.zero_index}):
        raise InternalConsistencyError(f"{ring.name}: quotient by the radical is not semisimple")
    return quotient, hom


def wedderburn_signature(ring: RingTable) -> List[Tuple[int, int]]:
    """Matrix-ring factors (m, q) of a semisimple ring, sorted.

    Each primitive central idempotent e cuts out a simple factor Re whose
    centre Ze is GF(q) and whose order is q^(m*m).
    """
    if ring.radical != frozenset({ring.zero_index}):
        raise InvalidParameterError(f"{ring.name} has a nonzero radical; pass its quotient by the radical")
    centre = np.array(center_of(ring))
    idempotents = [int(e) for e in centre if ring.mul[e, e] == e and e != ring.zero_index]
    signature = []
    for e in idempotents:
        below = [f for f in idempotents if f != e and ring.mul[e, f] == f]
        if below:
            continue
        size = np.unique(ring.mul[e, :]).size
        q = np.unique(ring.mul[e, centre]).size
        m2 = integer_log(size, q)
        m = int(round(m2 ** 0.5)) if m2 is not None else None
        if m is None or m * m != m2:
            raise InternalConsistencyError(f"{ring.name}: simple factor of order {size} over GF({q}) is not a matrix ring")
        signature.append((m, q))
    return sorted(signature)


def find_subfield(ring: RingTable, order: int) -> Optional[Tuple[int, np.ndarray]]:
    """A subfield of the given order containing 1, as (generator, elements).

    Elements are listed as 0, 1, g, g^2, ...; generators are tried in index
    order so the result is deterministic.
    """
    for g in ring.unit_list:
        powers, x = [ring.one_index], int(g)
        while x != ring.one_index and len(powers) < order:
            powers.append(x)
            x = int(ring.mul[x, g])
        if x != ring.one_index or len(powers) != order - 1:
            continue
        elements = np.array([ring.zero_index] + powers)
        members = np.zeros(ring.order, dtype=bool)
        members[elements] = True
        if members[ring.add[np.ix_(elements, elements)]].all():
            return int(g), elements
    return None
