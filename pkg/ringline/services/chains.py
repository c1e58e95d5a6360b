"""
Ringline - Chain Geometries
Subfield embeddings, the standard chain and its GL2 orbit, chain counts
through distant triples, F-chain intersections and finite Moebius geometries
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.config import settings
from ..core.exceptions import (
    CapExceededError,
    CertificationError,
    EmbeddingError,
    InternalConsistencyError,
    InvalidParameterError,
)
from ..schemas.ringspec import GaloisField, RingSpec
from ..utils.helpers import is_prime, prime_power
from .action import Block, LineAction, line_action, orbit, stabiliser_order
from .designs.model import Design, make_design, verify_dd
from .projline import ProjLine, build_line
from .rings import RingHom, RingTable, build_ring, find_subfield, make_ring, quotient_by_radical

logger = logging.getLogger(__name__)

STRATEGIES = ("prime", "constants", "wedderburn")


@dataclass(frozen=True, eq=False)
class SubfieldEmbedding:
    """An injective unital homomorphism K -> R from a field"""

    field: RingTable
    ring: RingTable
    hom: RingHom
    strategy: str
    description: str

    @property
    def image(self) -> np.ndarray:
        return self.hom.map

    @property
    def order(self) -> int:
        return self.field.order

    def labels(self) -> List[str]:
        return [self.ring.labels[x] for x in sorted(int(y) for y in self.image)]


def _subring(ring: RingTable, elements: Sequence[int], name: str) -> Tuple[RingTable, np.ndarray]:
    """Operation tables of R restricted to a closed subset, elements kept in R's order."""
    elements = np.array(sorted(int(x) for x in elements))
    position = np.full(ring.order, -1)
    position[elements] = np.arange(elements.size)
    add = position[ring.add[np.ix_(elements, elements)]]
    mul = position[ring.mul[np.ix_(elements, elements)]]
    if (add < 0).any() or (mul < 0).any():
        raise EmbeddingError(f"elements {elements.tolist()} are not closed in {ring.name}")
    sub = make_ring(add, mul, [ring.labels[x] for x in elements], name=name)
    return sub, elements


def _finish(ring: RingTable, field: RingTable, mapping: np.ndarray, strategy: str, description: str) -> SubfieldEmbedding:
    hom = RingHom(field, ring, np.asarray(mapping))
    if not field.is_field:
        raise EmbeddingError(f"{description} is not a field")
    if not hom.is_injective or not hom.is_homomorphism():
        raise EmbeddingError(f"{description} -> {ring.name} is not an injective unital homomorphism")
    logger.info("Embedded %s into %s (%s): %s", description, ring.name, strategy,
                [ring.labels[x] for x in sorted(int(y) for y in mapping)])
    return SubfieldEmbedding(field, ring, hom, strategy, description)


def _found_subfield(ring: RingTable, order: int, strategy: str) -> SubfieldEmbedding:
    found = find_subfield(ring, order)
    if found is None:
        raise EmbeddingError(f"{ring.name} contains no subfield of order {order}")
    _, elements = found
    field, mapping = _subring(ring, elements, f"GF({order})")
    return _finish(ring, field, mapping, strategy, f"GF({order})")


def embed_subfield(
    ring: RingTable,
    field_spec: Optional[RingSpec] = None,
    witness: Union[str, int] = "wedderburn",
) -> SubfieldEmbedding:
    """Embed a field into the ring.

    ``witness`` is one of ``prime`` (the field generated by 1), ``constants``
    (the coefficient field of an algebra), ``wedderburn`` (a complement of
    the radical isomorphic to R/rad R), ``search`` (any subfield of the order
    of ``field_spec``) or an element of R: the image of the generator t of
    ``field_spec`` = GF(p)[t]/(f).
    """
    if witness == "constants":
        if ring.coefficients is not None:
            hom = ring.coefficients
            return _finish(ring, hom.domain, hom.map, "constants", hom.domain.name or "constants")
        if ring.is_field:
            return _finish(ring, ring, np.arange(ring.order), "constants", ring.name)
        raise EmbeddingError(f"{ring.name} has no coefficient field")
    if witness == "prime":
        if not is_prime(ring.char):
            raise EmbeddingError(f"{ring.name} has characteristic {ring.char}, not a prime")
        field = build_ring(GaloisField(q=ring.char))
        mapping, x = [ring.zero_index], ring.zero_index
        for _ in range(ring.char - 1):
            x = int(ring.add[x, ring.one_index])
            mapping.append(x)
        return _finish(ring, field, np.array(mapping), "prime", field.name)
    if witness == "wedderburn":
        quotient = ring if ring.radical == frozenset({ring.zero_index}) else quotient_by_radical(ring)[0]
        if not quotient.is_field:
            raise EmbeddingError(f"{ring.name}/rad is not a field; give an explicit subfield")
        return _found_subfield(ring, quotient.order, "wedderburn")
    if witness == "search":
        if not isinstance(field_spec, GaloisField):
            raise EmbeddingError("a subfield search needs a GF(q) field spec")
        return _found_subfield(ring, field_spec.q, "search")
    if isinstance(witness, str):
        if witness not in ring.labels:
            raise EmbeddingError(f"{witness!r} is neither an embedding strategy nor an element of {ring.name}")
        witness = ring.index(witness)

    if not isinstance(field_spec, GaloisField):
        raise EmbeddingError("an explicit generator image needs a GF(q) field spec")
    field = build_ring(field_spec)
    p, n = prime_power(field_spec.q)
    g = ring.index(witness)
    powers, x = [], ring.one_index
    for _ in range(n):
        powers.append(x)
        x = int(ring.mul[x, g])
    mapping = []
    for k in range(field.order):
        value = ring.zero_index
        for i in range(n):
            for _ in range((k // p ** i) % p):
                value = int(ring.add[value, powers[i]])
        mapping.append(value)
    return _finish(ring, field, np.array(mapping), f"generator {ring.labels[g]}", field.name)


def standard_chain(line: ProjLine, embedding: SubfieldEmbedding) -> Block:
    """Image of P(K) under K(k, l) -> R(k, l)."""
    k_line = build_line(embedding.field)
    image = embedding.image
    return tuple(sorted(line.point_of((int(image[a]), int(image[b]))) for a, b in k_line.reps))


@dataclass(frozen=True, eq=False)
class ChainGeometry:
    line: ProjLine
    embedding: SubfieldEmbedding
    action: LineAction
    standard_chain: Block
    chains: Tuple[Block, ...]
    lambda3: int
    normaliser_index: int
    stabiliser_order: int

    @cached_property
    def incidence(self) -> np.ndarray:
        """Chains x points boolean incidence"""
        matrix = np.zeros((len(self.chains), self.line.size), dtype=bool)
        for i, chain in enumerate(self.chains):
            matrix[i, list(chain)] = True
        return matrix


def chains_through(geometry: ChainGeometry, points: Sequence[int]) -> List[Block]:
    mask = geometry.incidence[:, list(points)].all(axis=1)
    return [geometry.chains[i] for i in np.flatnonzero(mask)]


def _distant_triple_counts(line: ProjLine, incidence: np.ndarray) -> np.ndarray:
    """Chain counts through every mutually distant triple p < q < r."""
    d = line.distant_matrix
    inc = incidence.astype(np.float32)
    counts = []
    for p in range(line.size):
        rows = inc[incidence[:, p]]
        through = rows.T @ rows
        mask = np.triu(d[p][:, None] & d[p][None, :] & d, k=1)
        mask[: p + 1, :] = False
        counts.append(through[mask])
    return np.concatenate(counts)


def _sampled_triple_counts(line: ProjLine, incidence: np.ndarray, samples: int) -> np.ndarray:
    rng = np.random.default_rng(settings.seed)
    d = line.distant_matrix
    counts = []
    while len(counts) < samples:
        p = int(rng.integers(line.size))
        q = int(rng.choice(np.flatnonzero(d[p])))
        common = np.flatnonzero(d[p] & d[q])
        if not common.size:
            continue
        r = int(rng.choice(common))
        counts.append(int(incidence[:, [p, q, r]].all(axis=1).sum()))
    return np.array(counts)


def normaliser_index(ring: RingTable, embedding: SubfieldEmbedding) -> int:
    """[R* : N] with N = { n in R* : n^-1 K* n = K* }."""
    members = np.zeros(ring.order, dtype=bool)
    members[embedding.image] = True
    kstar = np.array([x for x in embedding.image if x != ring.zero_index])
    units = ring.unit_list
    conj = ring.mul[ring.mul[ring.inverse[units][:, None], kstar[None, :]], units[:, None]]
    normal = int(members[conj].all(axis=1).sum())
    if units.size % normal:
        raise InternalConsistencyError(f"normaliser of order {normal} does not divide |R*| = {units.size}")
    return units.size // normal


def conjugate_intersection(ring: RingTable, embedding: SubfieldEmbedding) -> Tuple[int, ...]:
    """F = intersection of a^-1 K a over all units a."""
    k = np.asarray(embedding.image)
    units = ring.unit_list
    conj = ring.mul[ring.mul[ring.inverse[units][:, None], k[None, :]], units[:, None]]
    masks = np.zeros((units.size, ring.order), dtype=bool)
    masks[np.arange(units.size)[:, None], conj] = True
    return tuple(int(x) for x in np.flatnonzero(masks.all(axis=0)))


def build_chain_geometry(
    line: ProjLine,
    embedding: SubfieldEmbedding,
    action: Optional[LineAction] = None,
    *,
    cap: Optional[int] = None,
) -> ChainGeometry:
    """Chain geometry: the orbit of the standard chain under GL2(R).

    The number of chains through a mutually distant triple is counted
    directly, checked constant, and must equal the normaliser index.
    """
    if embedding.ring is not line.ring:
        raise InvalidParameterError("embedding and line are over different rings")
    action = action or line_action(line)
    c0 = standard_chain(line, embedding)
    chains = tuple(orbit([c0], action.perms, cap=cap))
    stab = stabiliser_order(c0, action.perms, action.group_order)
    index = normaliser_index(line.ring, embedding)
    geometry = ChainGeometry(line, embedding, action, c0, chains, 0, index, stab)

    triple = (line.infinity, line.origin, line.unit_point)
    direct = len(chains_through(geometry, triple))
    if line.size <= settings.invariance_check_limit:
        counts = _distant_triple_counts(line, geometry.incidence)
    else:
        counts = _sampled_triple_counts(line, geometry.incidence, settings.lambda_samples)
    if counts.size and (counts != direct).any():
        raise InternalConsistencyError(
            f"chains through distant triples vary: {sorted(set(int(c) for c in counts))}"
        )
    if direct != index:
        raise InternalConsistencyError(f"direct chain count {direct} differs from normaliser index {index}")
    object.__setattr__(geometry, "lambda3", direct)
    logger.info("Chain geometry over %s in %s: %d chains of size %d, lambda3=%d",
                embedding.description, line.ring.name, len(chains), len(c0), direct)
    return geometry


def f_chain_intersection(geometry: ChainGeometry, triple: Sequence[int]) -> Block:
    """Intersection of all chains through three mutually distant points; an F-chain."""
    line = geometry.line
    p, q, r = triple
    if not (line.distant_matrix[p, q] and line.distant_matrix[p, r] and line.distant_matrix[q, r]):
        raise InvalidParameterError(f"points {tuple(triple)} are not mutually distant")
    through = chains_through(geometry, triple)
    common = set(through[0])
    for chain in through[1:]:
        common &= set(chain)
    result = tuple(sorted(common))

    f = conjugate_intersection(line.ring, geometry.embedding)
    f_chain = tuple(sorted({int(line.pair_index[a, b]) for a in f for b in f if line.pair_index[a, b] >= 0}))
    if len(result) != len(f) + 1:
        raise InternalConsistencyError(f"chain intersection has {len(result)} points, F has {len(f)} elements")
    try:
        f_chains = orbit([f_chain], geometry.action.perms)
    except CapExceededError:
        logger.debug("F-chain orbit too large; membership check skipped")
    else:
        if result not in set(f_chains):
            raise InternalConsistencyError(f"chain intersection {result} is not an F-chain")
    return result


def chain_design(geometry: ChainGeometry, t: int = 3) -> Design:
    """The chain geometry as a divisible design on parallel classes, certified at t."""
    line = geometry.line
    design = make_design(
        line.size,
        line.parallel_classes,
        geometry.chains,
        metadata={"K": geometry.embedding.description, "R": line.ring.name},
    )
    result = verify_dd(design, t)
    if not result.ok:
        raise CertificationError(result.violation)
    return result.design


def moebius_design(q: int, h: int) -> Design:
    """Sigma(GF(q), GF(q^h)) as a 3-(1, q+1, 1) design."""
    if prime_power(q) is None or h < 1:
        raise InvalidParameterError(f"Moebius geometry needs a prime power q and h >= 1, got q={q}, h={h}")
    ring = build_ring(GaloisField(q=q ** h))
    embedding = embed_subfield(ring, GaloisField(q=q), "search")
    geometry = build_chain_geometry(build_line(ring), embedding)
    return chain_design(geometry, 3)
