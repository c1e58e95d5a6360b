"""
Ringline - Design Isomorphism
Bijections of the point sets preserving classes and blocks in both directions,
found by VF2 search on coloured incidence graphs
"""

import logging
from typing import Dict, Mapping, Optional

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from ...core.config import settings
from ...core.exceptions import CapExceededError, InternalConsistencyError
from .model import Design, verify_dd

logger = logging.getLogger(__name__)


def _incidence_graph(design: Design) -> nx.Graph:
    """Points, classes and blocks as coloured nodes; membership as edges."""
    graph = nx.Graph()
    degrees = design.degrees
    for x in range(design.v):
        size = len(design.classes[int(design.class_of[x])])
        graph.add_node(("p", x), kind="point", profile=(size, int(degrees[x])))
    for i, members in enumerate(design.classes):
        graph.add_node(("c", i), kind="class", profile=len(members))
        graph.add_edges_from((("c", i), ("p", x)) for x in members)
    for j, block in enumerate(design.blocks):
        graph.add_node(("b", j), kind="block", profile=len(block))
        graph.add_edges_from((("b", j), ("p", x)) for x in block)
    return graph


def _same_colour(a: Mapping, b: Mapping) -> bool:
    return a["kind"] == b["kind"] and a["profile"] == b["profile"]


def _invariants(design: Design):
    return (
        design.v,
        design.b,
        sorted(len(c) for c in design.classes),
        sorted(len(b) for b in design.blocks),
        sorted(design.degrees.tolist()),
    )


def preserves_blocks_one_way(d1: Design, d2: Design, mapping: Mapping[int, int]) -> bool:
    """Every block of d1 maps onto a block of d2; says nothing about the converse."""
    targets = set(d2.blocks)
    return all(tuple(sorted(mapping[x] for x in block)) in targets for block in d1.blocks)


def _preserves_classes_one_way(d1: Design, d2: Design, mapping: Mapping[int, int]) -> bool:
    targets = set(d2.classes)
    return all(tuple(sorted(mapping[x] for x in members)) in targets for members in d1.classes)


def is_isomorphism(d1: Design, d2: Design, mapping: Mapping[int, int]) -> bool:
    """A bijection carrying classes to classes and blocks to blocks, in both directions."""
    if d1.v != d2.v or sorted(mapping) != list(range(d1.v)) or sorted(mapping.values()) != list(range(d2.v)):
        return False
    inverse = {y: x for x, y in mapping.items()}
    return (
        preserves_blocks_one_way(d1, d2, mapping)
        and preserves_blocks_one_way(d2, d1, inverse)
        and _preserves_classes_one_way(d1, d2, mapping)
        and _preserves_classes_one_way(d2, d1, inverse)
    )


def dd_isomorphic(
    d1: Design,
    d2: Design,
    t: Optional[int] = None,
    *,
    limit: Optional[int] = None,
) -> Optional[Dict[int, int]]:
    """Point bijection d1 -> d2 preserving classes and blocks, or None when none exists.

    With ``t`` both designs must certify at t with equal parameters.
    """
    limit = settings.isomorphism_limit if limit is None else limit
    if max(d1.v, d2.v) > limit:
        raise CapExceededError(f"isomorphism search is limited to {limit} points")
    if d1.v == d2.v and d1.classes == d2.classes and d1.blocks == d2.blocks:
        return {x: x for x in range(d1.v)}
    if _invariants(d1) != _invariants(d2):
        logger.debug("Designs differ in counting invariants")
        return None
    if t is not None:
        r1, r2 = verify_dd(d1, t), verify_dd(d2, t)
        if r1.ok != r2.ok or (r1.ok and r1.params != r2.params):
            logger.debug("Designs certify differently at t=%d", t)
            return None

    matcher = GraphMatcher(_incidence_graph(d1), _incidence_graph(d2), node_match=_same_colour)
    if not matcher.is_isomorphic():
        return None
    mapping = {x: y for (kind, x), (_, y) in matcher.mapping.items() if kind == "p"}
    if not is_isomorphism(d1, d2, mapping):
        raise InternalConsistencyError("graph isomorphism does not restrict to a design isomorphism")
    return dict(sorted(mapping.items()))
