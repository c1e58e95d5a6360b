"""
Ringline - Projective Line
P(R) with canonical point representatives, the distant relation and
radical parallelism
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Optional, Tuple, Union

import numpy as np

from ..core.config import settings
from ..core.exceptions import InternalConsistencyError, NotAdmissibleError
from ..schemas.reports import LineExport
from ..schemas.ringspec import RingSpec
from ..utils.helpers import product
from .rings import RingTable, build_ring, quotient_by_radical, wedderburn_signature

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True)
class PLinePoint:
    id: int
    rep: Pair


@dataclass(frozen=True, eq=False)
class ProjLine:
    """Points of P(R), numbered in the order of their canonical representatives.

    ``pair_index[a, b]`` is the point R(a, b) for admissible pairs and -1
    otherwise.
    """

    ring: RingTable
    reps: np.ndarray
    pair_index: np.ndarray
    distant_matrix: np.ndarray
    parallel_of: np.ndarray
    parallel_classes: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.reps)

    @cached_property
    def points(self) -> Tuple[PLinePoint, ...]:
        return tuple(PLinePoint(i, (int(a), int(b))) for i, (a, b) in enumerate(self.reps))

    @cached_property
    def point_lookup(self) -> Dict[Pair, int]:
        return {p.rep: p.id for p in self.points}

    def point_of(self, pair: Pair) -> int:
        a, b = pair
        pid = int(self.pair_index[a, b])
        if pid < 0:
            raise NotAdmissibleError(f"({self.ring.labels[a]}, {self.ring.labels[b]}) is not admissible")
        return pid

    @property
    def infinity(self) -> int:
        return self.point_of((self.ring.one_index, self.ring.zero_index))

    @property
    def origin(self) -> int:
        return self.point_of((self.ring.zero_index, self.ring.one_index))

    @property
    def unit_point(self) -> int:
        return self.point_of((self.ring.one_index, self.ring.one_index))

    def neighbourhood(self, p: int) -> Tuple[int, ...]:
        """Points distant to p."""
        return tuple(int(q) for q in np.flatnonzero(self.distant_matrix[p]))

    def label(self, p: int) -> str:
        a, b = self.reps[p]
        return f"R({self.ring.labels[a]},{self.ring.labels[b]})"


def is_unimodular(ring: RingTable, pair: Pair) -> bool:
    """ax + by = 1 for some x, y."""
    a, b = pair
    return bool((ring.add[ring.mul[a][:, None], ring.mul[b][None, :]] == ring.one_index).any())


def unimodular_matrix(ring: RingTable) -> np.ndarray:
    """Boolean (n, n) table of unimodular pairs.

    (a, b) is unimodular iff 1 - aR meets bR.
    """
    n = ring.order
    rows = np.arange(n)[:, None]
    right_ideal = np.zeros((n, n), dtype=np.float32)
    right_ideal[rows, ring.mul] = 1
    one_minus = ring.add[ring.one_index, ring.neg]
    shifted = np.zeros((n, n), dtype=np.float32)
    shifted[rows, one_minus[ring.mul]] = 1
    return (shifted @ right_ideal.T) > 0


def row_modules(ring: RingTable) -> Tuple[np.ndarray, np.ndarray]:
    """Left submodule R(a, b) of R^2 for every pair, as a boolean mask over pair codes.

    Returns (masks, injective) indexed by the pair code a*n + b; ``injective``
    marks pairs whose row map x -> x(a, b) is injective.
    """
    n = ring.order
    pairs = np.arange(n * n)
    codes = ring.mul[:, pairs // n].T * n + ring.mul[:, pairs % n].T
    masks = np.zeros((n * n, n * n), dtype=bool)
    masks[pairs[:, None], codes] = True
    return masks, masks.sum(axis=1) == n


def completable_pairs(ring: RingTable) -> np.ndarray:
    """Pairs that are the first row of some invertible matrix (small rings only).

    Rows r1, r2 form an invertible matrix iff both row maps are injective and
    R r1 and R r2 meet only in zero.
    """
    masks, injective = row_modules(ring)
    f = masks.astype(np.float32)
    valid = injective[:, None] & injective[None, :] & ((f @ f.T) == 1)
    return valid.any(axis=1).reshape(ring.order, ring.order)


def is_invertible(ring: RingTable, a: int, b: int, c: int, d: int) -> bool:
    """Whether the matrix with rows (a, b), (c, d) is invertible over the ring."""
    if ring.is_commutative:
        det = ring.sub(int(ring.mul[a, d]), int(ring.mul[b, c]))
        return bool(ring.unit_mask[det])
    n = ring.order
    first = ring.add[ring.mul[:, a][:, None], ring.mul[:, c][None, :]]
    second = ring.add[ring.mul[:, b][:, None], ring.mul[:, d][None, :]]
    return np.unique(first * n + second).size == n * n


def is_admissible(ring: RingTable, pair: Pair) -> bool:
    """Admissible pairs are the unimodular ones; small rings also check matrix completion."""
    unimodular = is_unimodular(ring, pair)
    if ring.order <= settings.gl2_enumeration_limit:
        completable = bool(completable_pairs(ring)[pair])
        if completable != unimodular:
            raise InternalConsistencyError(
                f"{ring.name}: pair {pair} unimodular={unimodular} but completable={completable}"
            )
    return unimodular


def canonical_point(ring: RingTable, pair: Pair) -> Pair:
    """Least member of the unit orbit { u(a, b) } in lexicographic element order."""
    if not is_unimodular(ring, pair):
        raise NotAdmissibleError(f"({ring.labels[pair[0]]}, {ring.labels[pair[1]]}) is not admissible")
    units = ring.unit_list
    keys = ring.mul[units, pair[0]].astype(np.int64) * ring.order + ring.mul[units, pair[1]]
    best = int(keys.min())
    return divmod(best, ring.order)


def _distant_matrix(ring: RingTable, reps: np.ndarray) -> np.ndarray:
    a, b = reps[:, 0], reps[:, 1]
    if ring.is_commutative:
        det = ring.add[ring.mul[a[:, None], b[None, :]], ring.neg[ring.mul[b[:, None], a[None, :]]]]
        return ring.unit_mask[det]
    # rows of admissible pairs have injective row maps, so invertibility
    # reduces to the two cyclic submodules meeting only in zero
    n = ring.order
    codes = ring.mul[:, a].T.astype(np.int64) * n + ring.mul[:, b].T
    distant = np.zeros((len(reps), len(reps)), dtype=bool)
    member = np.zeros(n * n, dtype=bool)
    for p in range(len(reps) - 1):
        member[codes[p]] = True
        meets = member[codes[p + 1:]].sum(axis=1)
        member[codes[p]] = False
        distant[p, p + 1:] = meets == 1
    return distant | distant.T


def _group_classes(labels: np.ndarray) -> Tuple[Tuple[int, ...], ...]:
    classes: Dict[int, list] = {}
    for p, c in enumerate(labels):
        classes.setdefault(int(c), []).append(p)
    return tuple(sorted(tuple(members) for members in classes.values()))


def build_line(ring: RingTable) -> ProjLine:
    """Enumerate, canonicalize and relate all points of P(R)."""
    n = ring.order
    unimodular = unimodular_matrix(ring)
    if n <= settings.gl2_enumeration_limit and not np.array_equal(unimodular, completable_pairs(ring)):
        raise InternalConsistencyError(f"{ring.name}: unimodular and admissible pairs differ")

    units = ring.unit_list
    pair_index = np.full((n, n), -1, dtype=np.int64)
    reps = []
    # scanning in lexicographic order meets the least member of each orbit first
    for a, b in zip(*np.nonzero(unimodular)):
        if pair_index[a, b] >= 0:
            continue
        pair_index[ring.mul[units, a], ring.mul[units, b]] = len(reps)
        reps.append((int(a), int(b)))
    reps = np.array(reps, dtype=np.int64).reshape(-1, 2)
    if (pair_index >= 0).sum() != unimodular.sum():
        raise InternalConsistencyError(f"{ring.name}: unit orbits leave the admissible pairs")

    distant = _distant_matrix(ring, reps)
    np.fill_diagonal(distant, False)

    if ring.radical == frozenset({ring.zero_index}):
        parallel_of = np.arange(len(reps))
    else:
        quotient, hom = quotient_by_radical(ring)
        bar = build_line(quotient)
        parallel_of = bar.pair_index[hom.map[reps[:, 0]], hom.map[reps[:, 1]]]
    classes = _group_classes(parallel_of)

    line = ProjLine(ring, reps, pair_index, distant, parallel_of, classes)
    for array in (reps, pair_index, distant, parallel_of):
        array.setflags(write=False)

    rad_size = len(ring.radical)
    if any(len(c) != rad_size for c in classes):
        raise InternalConsistencyError(f"{ring.name}: parallel classes are not of size |rad R|")
    if line.size <= settings.parallel_oracle_limit and not np.array_equal(parallel_matrix(line), definitional_parallel(line)):
        raise InternalConsistencyError(f"{ring.name}: quotient parallelism disagrees with its definition")
    logger.info("Built P(%s): %d points, %d parallel classes", ring.name, line.size, len(classes))
    return line


def parallel_matrix(line: ProjLine) -> np.ndarray:
    return line.parallel_of[:, None] == line.parallel_of[None, :]


def definitional_parallel(line: ProjLine) -> np.ndarray:
    """p || q iff every point distant to p is distant to q."""
    d = line.distant_matrix.astype(np.float32)
    shared = d @ d.T
    return shared == d.sum(axis=1)[:, None]


def distant(line: ProjLine, p: int, q: int) -> bool:
    return bool(line.distant_matrix[p, q])


def parallel(line: ProjLine, p: int, q: int) -> bool:
    return bool(line.parallel_of[p] == line.parallel_of[q])


def nondistant_witness(line: ProjLine) -> Optional[Tuple[int, int, int]]:
    """First (p, q, r) with p, q non-distant and q, r non-distant but p, r distant."""
    near = (~line.distant_matrix).astype(np.float32)
    broken = ((near @ near) > 0) & line.distant_matrix
    hits = np.argwhere(broken)
    if not hits.size:
        return None
    p, r = (int(x) for x in hits[0])
    q = int(np.flatnonzero(~line.distant_matrix[p] & ~line.distant_matrix[:, r])[0])
    return p, q, r


def nondistant_is_equivalence(line: ProjLine) -> bool:
    return nondistant_witness(line) is None


def affine_points(line: ProjLine) -> np.ndarray:
    """Point ids of R(x, 1), x in element order."""
    ring = line.ring
    return line.pair_index[np.arange(ring.order), ring.one_index].copy()


def matrix_line_count(m: int, q: int) -> int:
    """|P(M_m(GF(q)))|, the number of m-subspaces of GF(q)^(2m)."""
    count = Fraction(1)
    for i in range(m):
        count *= Fraction(q ** (2 * m - i) - 1, q ** (m - i) - 1)
    if count.denominator != 1:
        raise InternalConsistencyError(f"non-integral point count for M_{m}(GF({q}))")
    return count.numerator


def count_points(ring: Union[RingTable, RingSpec]) -> int:
    """Closed-form |P(R)| = |rad R| times the point counts of the Wedderburn factors of R/rad R."""
    if not isinstance(ring, RingTable):
        ring = build_ring(ring)
    quotient = ring if ring.radical == frozenset({ring.zero_index}) else quotient_by_radical(ring)[0]
    return len(ring.radical) * product(matrix_line_count(m, q) for m, q in wedderburn_signature(quotient))


def line_export(line: ProjLine) -> LineExport:
    labels = line.ring.labels
    close = np.argwhere(np.triu(line.distant_matrix))
    return LineExport(
        ring=line.ring.name,
        points=[(labels[a], labels[b]) for a, b in line.reps],
        distant=[(int(p), int(q)) for p, q in close],
        parallel_classes=[list(c) for c in line.parallel_classes],
    )
