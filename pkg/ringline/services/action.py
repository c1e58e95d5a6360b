"""
Ringline - GL2 Action
Generators of GL2(R), their permutations of P(R), orbits and group orders
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import settings
from ..core.exceptions import (
    CapExceededError,
    GenerationError,
    InternalConsistencyError,
    InvalidParameterError,
)
from ..utils.helpers import product
from ..utils.parallel import ordered_map
from .projline import ProjLine, parallel_matrix, row_modules
from .rings import RingTable, quotient_by_radical, wedderburn_signature

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix [[a, b], [c, d]] of element indices"""

    a: int
    b: int
    c: int
    d: int

    def encode(self, n: int) -> int:
        return ((self.a * n + self.b) * n + self.c) * n + self.d

    @classmethod
    def decode(cls, code: int, n: int) -> "Mat2":
        code, d = divmod(int(code), n)
        code, c = divmod(code, n)
        a, b = divmod(code, n)
        return cls(a, b, c, d)

    def describe(self, ring: RingTable) -> str:
        lab = ring.labels
        return f"[[{lab[self.a]},{lab[self.b]}],[{lab[self.c]},{lab[self.d]}]]"


@dataclass(frozen=True)
class GeneratorSet:
    matrices: Tuple[Mat2, ...]

    def __len__(self) -> int:
        return len(self.matrices)


def generator_set(ring: RingTable) -> GeneratorSet:
    """E12(x), E21(x) for every x and diag(u,1), diag(1,u) for every unit u."""
    one, zero = ring.one_index, ring.zero_index
    mats = [Mat2(one, x, zero, one) for x in range(ring.order)]
    mats += [Mat2(one, zero, x, one) for x in range(ring.order)]
    mats += [Mat2(int(u), zero, zero, one) for u in ring.unit_list]
    mats += [Mat2(one, zero, zero, int(u)) for u in ring.unit_list]
    return GeneratorSet(tuple(mats))


def mat_mul(ring: RingTable, m1: Mat2, m2: Mat2) -> Mat2:
    add, mul = ring.add, ring.mul
    return Mat2(
        int(add[mul[m1.a, m2.a], mul[m1.b, m2.c]]),
        int(add[mul[m1.a, m2.b], mul[m1.b, m2.d]]),
        int(add[mul[m1.c, m2.a], mul[m1.d, m2.c]]),
        int(add[mul[m1.c, m2.b], mul[m1.d, m2.d]]),
    )


def point_permutation(line: ProjLine, matrix: Mat2) -> np.ndarray:
    """Permutation p -> p^matrix of the point ids, acting on row representatives."""
    ring = line.ring
    x, y = line.reps[:, 0], line.reps[:, 1]
    first = ring.add[ring.mul[x, matrix.a], ring.mul[y, matrix.c]]
    second = ring.add[ring.mul[x, matrix.b], ring.mul[y, matrix.d]]
    perm = line.pair_index[first, second]
    if (perm < 0).any() or np.unique(perm).size != line.size:
        raise InvalidParameterError(f"{matrix.describe(ring)} is not invertible over {ring.name}")
    return perm


def apply(line: ProjLine, matrix: Mat2, point: int) -> int:
    return int(point_permutation(line, matrix)[point])


@dataclass(frozen=True, eq=False)
class LineAction:
    """The generator set of GL2(R) as permutations of P(R)"""

    line: ProjLine
    generators: GeneratorSet
    perms: Tuple[np.ndarray, ...]

    @cached_property
    def group_order(self) -> int:
        return gl2_order(self.line.ring)


def line_action(line: ProjLine, generators: Optional[GeneratorSet] = None) -> LineAction:
    generators = generators or generator_set(line.ring)
    unique, seen = [], set()
    for matrix in generators.matrices:
        perm = point_permutation(line, matrix)
        key = perm.tobytes()
        if key not in seen:
            seen.add(key)
            perm.setflags(write=False)
            unique.append(perm)
    logger.debug("%d generators act as %d distinct permutations", len(generators), len(unique))
    return LineAction(line, generators, tuple(unique))


# ========== Orbits ==========

def _images(perm: np.ndarray, frontier: np.ndarray, seen: np.ndarray, weights: np.ndarray, ordered: bool):
    image = perm[frontier]
    if not ordered:
        image.sort(axis=1)
    keys = image @ weights
    fresh = ~np.isin(keys, seen)
    return keys[fresh], image[fresh]


def _orbit_small(seeds: List[Block], perms: Sequence[np.ndarray], ordered: bool, cap: int) -> List[Block]:
    """Set-based breadth-first search for keys too wide for int64."""
    normal = (lambda s: s) if ordered else (lambda s: tuple(sorted(s)))
    seen = {normal(s) for s in seeds}
    frontier = list(seen)
    while frontier:
        fresh = []
        for perm in perms:
            for block in frontier:
                image = normal(tuple(int(perm[x]) for x in block))
                if image not in seen:
                    seen.add(image)
                    fresh.append(image)
        if len(seen) > cap:
            raise CapExceededError(f"orbit exceeds the block cap {cap}")
        frontier = fresh
    return sorted(seen)


def orbit(
    seeds: Iterable[Sequence[int]],
    perms: Sequence[np.ndarray],
    *,
    ordered: bool = False,
    cap: Optional[int] = None,
    threads: Optional[int] = None,
) -> List[Block]:
    """Closure of the seed blocks under the permutations, sorted.

    Blocks are sorted point-id tuples (kept as given when ``ordered``);
    the frontier is expanded one permutation at a time and deduplicated by
    an integer key.
    """
    seeds = [tuple(int(x) for x in s) for s in seeds]
    if not seeds:
        return []
    k = len(seeds[0])
    if any(len(s) != k for s in seeds):
        raise InvalidParameterError("orbit seeds must have equal size")
    cap = settings.block_cap if cap is None else cap
    if k == 0:
        return [()]
    degree = len(perms[0]) if len(perms) else max(max(s) for s in seeds) + 1
    if degree ** k >= 2 ** 62:
        return _orbit_small(seeds, perms, ordered, cap)

    weights = degree ** np.arange(k - 1, -1, -1, dtype=np.int64)
    frontier = np.array(seeds, dtype=np.int64)
    if not ordered:
        frontier.sort(axis=1)
    seen, first = np.unique(frontier @ weights, return_index=True)
    frontier = frontier[first]
    collected = [frontier]
    while frontier.size:
        found = ordered_map(lambda p: _images(p, frontier, seen, weights, ordered), list(perms), threads)
        keys = np.concatenate([f[0] for f in found])
        rows = np.concatenate([f[1] for f in found]).reshape(-1, k)
        keys, first = np.unique(keys, return_index=True)
        frontier = rows[first]
        seen = np.union1d(seen, keys)
        if seen.size > cap:
            raise CapExceededError(f"orbit exceeds the block cap {cap}")
        collected.append(frontier)
    everything = np.concatenate(collected)
    everything = everything[np.argsort(everything @ weights)]
    return [tuple(int(x) for x in row) for row in everything]


def stabiliser_order(block: Sequence[int], perms: Sequence[np.ndarray], group_order: int, *, ordered: bool = False) -> int:
    """|G| / |orbit(block)|; failure to divide means the generators miss part of G."""
    size = len(orbit([block], perms, ordered=ordered))
    if group_order % size:
        raise GenerationError(f"orbit of size {size} does not divide the group order {group_order}")
    return group_order // size


# ========== Group orders ==========

def _gl_order(n: int, q: int) -> int:
    return product(q ** n - q ** i for i in range(n))


def gl2_order(ring: RingTable) -> int:
    """|rad R|^4 * |GL2(R/rad R)|, each Wedderburn factor M_m(GF(q)) contributing |GL_2m(q)|.

    Small rings are cross-checked by exhaustive enumeration.
    """
    quotient = ring if ring.radical == frozenset({ring.zero_index}) else quotient_by_radical(ring)[0]
    order = len(ring.radical) ** 4 * product(_gl_order(2 * m, q) for m, q in wedderburn_signature(quotient))
    if ring.order <= settings.gl2_enumeration_limit:
        counted = enumerate_gl2(ring).size
        if counted != order:
            raise InternalConsistencyError(f"|GL2({ring.name})|: formula {order}, enumeration {counted}")
    return order


def enumerate_gl2(ring: RingTable) -> np.ndarray:
    """Codes of every invertible matrix, sorted (small rings only)."""
    n = ring.order
    if n > settings.gl2_enumeration_limit:
        raise CapExceededError(f"GL2 enumeration is limited to rings of order {settings.gl2_enumeration_limit}")
    masks, injective = row_modules(ring)
    f = masks.astype(np.float32)
    valid = injective[:, None] & injective[None, :] & ((f @ f.T) == 1)
    first, second = np.nonzero(valid)
    return np.sort(first.astype(np.int64) * n * n + second)


def _decode_all(codes: np.ndarray, n: int) -> Tuple[np.ndarray, ...]:
    return codes // n ** 3, (codes // n ** 2) % n, (codes // n) % n, codes % n


def generated_group(ring: RingTable, generators: Optional[GeneratorSet] = None) -> np.ndarray:
    """Codes of the subgroup the generators generate, sorted (small rings only)."""
    n = ring.order
    if n > settings.gl2_enumeration_limit:
        raise CapExceededError(f"group closure is limited to rings of order {settings.gl2_enumeration_limit}")
    generators = generators or generator_set(ring)
    add, mul = ring.add, ring.mul
    visited = np.zeros(n ** 4, dtype=bool)
    start = Mat2(ring.one_index, ring.zero_index, ring.zero_index, ring.one_index).encode(n)
    visited[start] = True
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        a, b, c, d = _decode_all(frontier, n)
        images = []
        for g in generators.matrices:
            na = add[mul[a, g.a], mul[b, g.c]]
            nb = add[mul[a, g.b], mul[b, g.d]]
            nc = add[mul[c, g.a], mul[d, g.c]]
            nd = add[mul[c, g.b], mul[d, g.d]]
            images.append(((na.astype(np.int64) * n + nb) * n + nc) * n + nd)
        images = np.unique(np.concatenate(images))
        frontier = images[~visited[images]]
        visited[frontier] = True
    return np.flatnonzero(visited)


def pointwise_stabiliser(line: ProjLine, points: Sequence[int]) -> List[Mat2]:
    """Invertible matrices fixing every given point (small rings only)."""
    ring = line.ring
    codes = enumerate_gl2(ring)
    a, b, c, d = _decode_all(codes, ring.order)
    keep = np.ones(codes.size, dtype=bool)
    for p in points:
        x, y = (int(v) for v in line.reps[p])
        first = ring.add[ring.mul[x, a], ring.mul[y, c]]
        second = ring.add[ring.mul[x, b], ring.mul[y, d]]
        keep &= line.pair_index[first, second] == p
    return [Mat2.decode(code, ring.order) for code in codes[keep]]


def check_invariance(line: ProjLine, action: LineAction) -> bool:
    """Every generator preserves the distant relation and parallelism."""
    par = parallel_matrix(line)
    for perm in action.perms:
        grid = np.ix_(perm, perm)
        if not np.array_equal(line.distant_matrix[grid], line.distant_matrix):
            return False
        if not np.array_equal(par[grid], par):
            return False
    return True


def check_3_transitivity(line: ProjLine, action: Optional[LineAction] = None) -> bool:
    """Whether one ordered mutually distant triple reaches all of them."""
    if line.size > settings.transitivity_limit:
        raise CapExceededError(f"3-transitivity check is limited to {settings.transitivity_limit} points")
    action = action or line_action(line)
    d = line.distant_matrix.astype(np.float64)
    total = int(round(float((d * (d @ d)).sum())))
    seed = (line.infinity, line.origin, line.unit_point)
    reached = orbit([seed], action.perms, ordered=True, cap=max(total, 1))
    logger.info("Distant triples on P(%s): %d reached of %d", line.ring.name, len(reached), total)
    return len(reached) == total


def _permutation_closure(perms: Sequence[Sequence[int]], limit: int) -> set:
    perms = [tuple(int(x) for x in p) for p in perms]
    identity = tuple(range(len(perms[0])))
    seen = {identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for g in frontier:
            for p in perms:
                h = tuple(p[x] for x in g)
                if h not in seen:
                    seen.add(h)
                    fresh.append(h)
        if len(seen) > limit:
            raise CapExceededError(f"permutation group exceeds {limit} elements")
        frontier = fresh
    return seen


def permutation_group_order(perms: Sequence[Sequence[int]], limit: int = 100_000) -> int:
    """Order of the group generated by permutations of a small set."""
    return len(_permutation_closure(perms, limit))


def setwise_stabiliser_count(block: Sequence[int], perms: Sequence[Sequence[int]], limit: int = 100_000) -> Tuple[int, int]:
    """(|G|, |G_B|) for the permutation group G generated by perms, counted element by element."""
    target = sorted(int(x) for x in block)
    elements = _permutation_closure(perms, limit)
    fixing = sum(1 for g in elements if sorted(g[x] for x in target) == target)
    return len(elements), fixing
