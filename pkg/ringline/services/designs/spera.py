"""
Ringline - Spera Construction
Divisible designs as the orbit of a base block under a group that respects
the point classes and is transitive on class-transversal t-sets
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb, factorial
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from ...core.config import settings
from ...core.exceptions import (
    CertificationError,
    InternalConsistencyError,
    InvalidParameterError,
    SperaHypothesisError,
)
from ...utils.helpers import as_integer, transversal_count
from ..action import (
    LineAction,
    line_action,
    orbit,
    permutation_group_order,
    setwise_stabiliser_count,
    stabiliser_order,
)
from ..projline import ProjLine
from ..rings import center_of
from .model import Block, DDParams, Design, derive_lambda_i, make_design, transversal_subsets, verify_dd

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SperaInput:
    """Point classes, a permutation group by generators, a base block and a target t.

    ``ordered_tuples`` asks for transitivity on ordered transversal t-tuples
    instead of t-sets. ``local_parallelism`` records that the classes are the
    parallel classes of a line over a local ring, where transitivity on
    transversal triples is known.
    """

    v: int
    classes: Tuple[Block, ...]
    generators: Tuple[np.ndarray, ...]
    base_block: Block
    t: int
    group_order: Optional[int] = None
    labels: Optional[Tuple[str, ...]] = None
    local_parallelism: bool = False
    ordered_tuples: bool = False
    metadata: Mapping[str, str] = field(default_factory=dict)


def spera_from_line(
    line: ProjLine,
    base_block: Sequence[int],
    t: int,
    action: Optional[LineAction] = None,
    metadata: Optional[Mapping[str, str]] = None,
) -> SperaInput:
    """Spera input on P(R): parallel classes and the GL2 generator permutations."""
    action = action or line_action(line)
    return SperaInput(
        v=line.size,
        classes=line.parallel_classes,
        generators=action.perms,
        base_block=tuple(sorted(int(x) for x in base_block)),
        t=t,
        group_order=action.group_order,
        local_parallelism=line.ring.is_local,
        metadata=dict(metadata or {"R": line.ring.name}),
    )


def spera_counterexample() -> SperaInput:
    """Three points, classes {1} and {2,3}, the group generated by (2 3), base block {1,2}, t=2."""
    return SperaInput(
        v=3,
        classes=((0,), (1, 2)),
        generators=(np.array([0, 1, 2]), np.array([0, 2, 1])),
        base_block=(0, 1),
        t=2,
        labels=("1", "2", "3"),
    )


def _label(inp: SperaInput, x: int) -> str:
    return inp.labels[x] if inp.labels else str(x)


def _check_hypotheses(inp: SperaInput, skeleton: Design) -> None:
    owner = skeleton.class_of
    block = inp.base_block
    if np.unique(owner[list(block)]).size != len(block):
        raise InvalidParameterError(f"base block {block} is not class-transversal")
    if inp.t > len(block) or inp.t > skeleton.class_count:
        raise InvalidParameterError(f"t={inp.t} exceeds the base block size or the number of classes")

    for g, perm in enumerate(inp.generators):
        for members in skeleton.classes:
            images = owner[perm[list(members)]]
            if np.unique(images).size != 1:
                raise SperaHypothesisError(
                    "a", f"generator {g} splits class {tuple(_label(inp, x) for x in members)}",
                    {"generator": g, "class": members})

    sizes = {tuple(_label(inp, x) for x in members): len(members) for members in skeleton.classes}
    if len(set(sizes.values())) != 1:
        raise SperaHypothesisError("b", f"class sizes differ: {sizes}", {"class_sizes": sizes})

    s = len(skeleton.classes[0])
    total = transversal_count(skeleton.class_count, s, inp.t)
    if inp.ordered_tuples:
        total *= factorial(inp.t)
    if total <= settings.transversal_check_limit:
        seed = next(transversal_subsets(skeleton, inp.t))
        reached = len(orbit([seed], inp.generators, ordered=inp.ordered_tuples))
        if reached != total:
            raise SperaHypothesisError(
                "c", f"the group reaches {reached} of {total} transversal {inp.t}-sets",
                {"reached": reached, "total": total, "seed": seed})
    elif inp.local_parallelism and inp.t <= 3:
        logger.debug("Transitivity on transversal %d-sets taken from 3-transitivity on distant triples", inp.t)
    else:
        logger.warning("Transitivity on %d transversal %d-sets not checked; relying on certification",
                       total, inp.t)


def spera_construct(inp: SperaInput) -> Design:
    """Blocks = orbit of the base block, certified exhaustively.

    lambda_t is counted directly, from b * C(k, t) over the number of
    transversal t-sets, and from |G| / |G_B0|. Up to the transitivity limit
    the setwise stabiliser G_B0 is counted element by element; above it
    orbit-stabiliser supplies it and the last two values coincide.
    """
    skeleton = make_design(inp.v, inp.classes, [inp.base_block], labels=inp.labels)
    _check_hypotheses(inp, skeleton)

    blocks = orbit([inp.base_block], inp.generators)
    design = make_design(inp.v, inp.classes, blocks, labels=inp.labels, metadata=inp.metadata)
    result = verify_dd(design, inp.t)
    if not result.ok:
        raise CertificationError(result.violation)
    design = result.design
    params = design.params

    subsets = transversal_count(design.class_count, params.s, params.t)
    by_blocks = Fraction(design.b * comb(params.k, params.t), subsets)
    group_order = inp.group_order or permutation_group_order(inp.generators)
    stabiliser = stabiliser_order(inp.base_block, inp.generators, group_order)
    if group_order <= settings.transitivity_limit:
        elements, fixing = setwise_stabiliser_count(inp.base_block, inp.generators)
    else:
        elements, fixing = group_order, stabiliser
    by_stabiliser = Fraction(elements, fixing) * Fraction(comb(params.k, params.t), subsets)
    if not params.lambda_t == by_blocks == by_stabiliser:
        raise InternalConsistencyError(
            f"lambda_t: direct {params.lambda_t}, block count {by_blocks}, stabiliser {by_stabiliser}")
    metadata = dict(design.metadata)
    metadata.update(group_order=str(group_order), stabiliser_order=str(stabiliser))
    return replace(design, metadata=metadata)


def truncated_chain_design(geometry, drop: int, t: int = 3) -> Design:
    """Spera design with base block the standard chain minus infinity, 0 and 1 (the first `drop` of them).

    drop=0 keeps the whole chain. Removing points needs a local algebra over
    K (K central) with |K| > drop + 1.
    """
    if drop not in (0, 1, 2, 3):
        raise InvalidParameterError(f"drop must be 0, 1, 2 or 3, got {drop}")
    line = geometry.line
    ring = line.ring
    q = geometry.embedding.order
    if drop:
        if q <= drop + 1:
            raise InvalidParameterError(f"dropping {drop} points needs |K| > {drop + 1}, got {q}")
        if not ring.is_local or not set(int(x) for x in geometry.embedding.image) <= set(center_of(ring)):
            raise InvalidParameterError(f"{ring.name} is not a local algebra over {geometry.embedding.description}")
    removed = {line.infinity, line.origin, line.unit_point} if drop == 3 else \
        set([line.infinity, line.origin][:drop])
    base = tuple(x for x in geometry.standard_chain if x not in removed)
    metadata = {"K": geometry.embedding.description, "R": ring.name, "drop": str(drop)}
    design = spera_construct(spera_from_line(line, base, t, geometry.action, metadata))
    if drop and t == 3:
        expected = (q + 1 - drop, comb(q - 2, drop))
        found = (design.params.k, design.params.lambda_t)
        if found != expected:
            raise InternalConsistencyError(f"truncated chain design has (k, lambda3)={found}, expected {expected}")
    return design


def laguerre_parameters(q: int, h: int, m: int = 1) -> dict:
    """Parameters of the chain design of GF(q) inside GF(q^m)[T]/(T^h).

    A transversal 3-(q^(m(h-1)), q+1, 1)-DD on (q^m + 1) * q^(m(h-1)) points;
    b, r and lambda_2 follow from the lambda_i recursion.
    """
    if h < 1 or m < 1:
        raise InvalidParameterError(f"h and m must be positive, got h={h}, m={m}")
    s = q ** (m * (h - 1))
    v = (q ** m + 1) * s
    params = DDParams(3, s, q + 1, 1)
    b, r, lambda2 = (as_integer(derive_lambda_i(params, v, i)) for i in range(3))
    return {"v": v, "s": s, "k": q + 1, "lambda3": 1, "b": b, "r": r, "lambda2": lambda2}


@dataclass(frozen=True)
class ChainProfile:
    v: int
    s1: int
    s2: int
    k: int
    lambda3: int
    local: bool
    equal_class_sizes: bool
    transversal_triples_on_chains: bool


def line_profile(line: ProjLine) -> Tuple[int, int]:
    """(|rad R|, number of points not distant to a given point)."""
    near = line.size - line.distant_matrix.sum(axis=1)
    if np.unique(near).size != 1:
        raise InternalConsistencyError(f"P({line.ring.name}): non-distant counts vary")
    s2 = int(near[0])
    if s2 != line.size - line.ring.order:
        raise InternalConsistencyError(f"P({line.ring.name}): neighbourhoods are not of size |R|")
    return len(line.ring.radical), s2


def chain_geometry_profile(geometry) -> ChainProfile:
    """How close a chain geometry comes to a 3-DD on the parallel classes.

    Chains consist of mutually distant points, so a transversal triple lies on
    a chain only when non-parallel points are always distant; in that case
    every transversal triple is mutually distant and lies on lambda3 chains.
    """
    line = geometry.line
    s1, s2 = line_profile(line)
    par = line.parallel_of[:, None] == line.parallel_of[None, :]
    covered = not bool((~par & ~line.distant_matrix).any()) and len(line.parallel_classes) >= 3
    return ChainProfile(
        v=line.size,
        s1=s1,
        s2=s2,
        k=len(geometry.standard_chain),
        lambda3=geometry.lambda3,
        local=line.ring.is_local,
        equal_class_sizes=s1 == s2,
        transversal_triples_on_chains=covered,
    )
