"""
Ringline - Constant-Weight Codes
The code of a divisible design: coordinates are point classes, each class
gains an ideal point with symbol 0, and every block becomes one word
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import FrozenSet, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from ..core.exceptions import FormatError, InternalConsistencyError, InvalidParameterError
from .designs.model import Design

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


@dataclass(frozen=True)
class ConstantWeightCode:
    n: int
    m: int
    k: int
    words: Tuple[Word, ...]


@dataclass(frozen=True)
class Psi:
    """Class order (coordinate i is class class_order[i]) and the symbol of every real point"""

    class_order: Tuple[int, ...]
    symbols: Mapping[int, int]


@dataclass(frozen=True)
class CodeIsomorphism:
    """Coordinate i goes to coordinates[i]; symbol a at coordinate i becomes symbols[i][a]."""

    coordinates: Tuple[int, ...]
    symbols: Tuple[Tuple[int, ...], ...]


def canonical_psi(design: Design) -> Psi:
    """Classes by least point id; within a class, points get 1..s in id order."""
    order = tuple(sorted(range(design.class_count), key=lambda i: design.classes[i][0]))
    symbols = {x: j + 1 for members in design.classes for j, x in enumerate(sorted(members))}
    return Psi(order, symbols)


def code_from_design(design: Design, psi: Optional[Psi] = None) -> ConstantWeightCode:
    """One word per block, in block order; zeros mark the classes a block misses."""
    sizes = {len(c) for c in design.classes}
    if len(sizes) != 1:
        raise InvalidParameterError(f"classes of unequal sizes {sorted(sizes)}")
    ks = {len(b) for b in design.blocks}
    if len(ks) != 1:
        raise InvalidParameterError(f"blocks of unequal sizes {sorted(ks)}")
    s, k = sizes.pop(), ks.pop()
    psi = psi or canonical_psi(design)
    if sorted(psi.class_order) != list(range(design.class_count)):
        raise InvalidParameterError("psi class order is not a permutation of the classes")
    for members in design.classes:
        if sorted(psi.symbols[x] for x in members) != list(range(1, s + 1)):
            raise InvalidParameterError(f"psi does not number class {members} by 1..{s}")

    position = {c: i for i, c in enumerate(psi.class_order)}
    owner = design.class_of
    words = []
    for block in design.blocks:
        word = [0] * design.class_count
        for x in block:
            word[position[int(owner[x])]] = psi.symbols[x]
        words.append(tuple(word))
    if len(set(words)) != len(words):
        raise InternalConsistencyError("two blocks give the same codeword")
    code = ConstantWeightCode(design.class_count, s + 1, k, tuple(words))
    logger.info("Code of length %d over %d symbols with %d words of weight %d", code.n, code.m, len(words), k)
    return code


def hamming_weight(word: Sequence[int]) -> int:
    return sum(1 for x in word if x != 0)


def hamming_distance(w1: Sequence[int], w2: Sequence[int]) -> int:
    if len(w1) != len(w2):
        raise InvalidParameterError(f"words of lengths {len(w1)} and {len(w2)}")
    return sum(1 for a, b in zip(w1, w2) if a != b)


def verify_constant_weight(code: ConstantWeightCode) -> bool:
    return all(len(w) == code.n and hamming_weight(w) == code.k for w in code.words)


# ========== Code isomorphism ==========

def _code_graph(code: ConstantWeightCode) -> nx.Graph:
    """Words, coordinates and (coordinate, symbol) nodes; symbol 0 keeps its own colour."""
    graph = nx.Graph()
    for i in range(code.n):
        graph.add_node(("c", i), kind="coordinate", zero=False)
        for a in range(code.m):
            graph.add_node(("s", i, a), kind="symbol", zero=a == 0)
            graph.add_edge(("c", i), ("s", i, a))
    for j, word in enumerate(code.words):
        graph.add_node(("w", j), kind="word", zero=False)
        graph.add_edges_from((("w", j), ("s", i, a)) for i, a in enumerate(word))
    return graph


def _same_colour(a: Mapping, b: Mapping) -> bool:
    return a["kind"] == b["kind"] and a["zero"] == b["zero"]


def apply_code_isomorphism(code: ConstantWeightCode, iso: CodeIsomorphism) -> FrozenSet[Word]:
    images = []
    for word in code.words:
        image = [0] * code.n
        for i, a in enumerate(word):
            image[iso.coordinates[i]] = iso.symbols[i][a]
        images.append(tuple(image))
    return frozenset(images)


def find_code_isomorphism(c1: ConstantWeightCode, c2: ConstantWeightCode) -> Optional[CodeIsomorphism]:
    """Coordinate permutation with per-coordinate symbol permutations fixing 0, or None."""
    if (c1.n, c1.m, c1.k, len(c1.words)) != (c2.n, c2.m, c2.k, len(c2.words)):
        return None
    matcher = GraphMatcher(_code_graph(c1), _code_graph(c2), node_match=_same_colour)
    if not matcher.is_isomorphic():
        return None
    mapping = matcher.mapping
    coordinates = tuple(mapping[("c", i)][1] for i in range(c1.n))
    symbols = tuple(tuple(mapping[("s", i, a)][2] for a in range(c1.m)) for i in range(c1.n))
    iso = CodeIsomorphism(coordinates, symbols)
    if apply_code_isomorphism(c1, iso) != frozenset(c2.words):
        raise InternalConsistencyError("graph isomorphism does not restrict to a code isomorphism")
    return iso


# ========== Files ==========

_HEADER = re.compile(r"^cwc\s+n=(\d+)\s+m=(\d+)\s+k=(\d+)$")


def write_code(code: ConstantWeightCode) -> str:
    lines = [f"cwc n={code.n} m={code.m} k={code.k}"]
    lines.extend(" ".join(str(a) for a in word) for word in code.words)
    return "\n".join(lines) + "\n"


def parse_code(text: str, source: str = "<text>") -> ConstantWeightCode:
    lines = [(i, raw.split("#", 1)[0].strip()) for i, raw in enumerate(text.splitlines(), start=1)]
    lines = [(i, s) for i, s in lines if s]
    if not lines:
        raise FormatError("missing 'cwc n=<n> m=<m> k=<k>' header", source=source)
    match = _HEADER.match(lines[0][1])
    if not match:
        raise FormatError("expected 'cwc n=<n> m=<m> k=<k>'", source=source, line=lines[0][0])
    n, m, k = (int(g) for g in match.groups())
    words = []
    for number, content in lines[1:]:
        try:
            word = tuple(int(a) for a in content.split())
        except ValueError:
            raise FormatError(f"expected symbols, got {content!r}", source=source, line=number) from None
        if len(word) != n or any(not 0 <= a < m for a in word):
            raise FormatError(f"word {word} is not of length {n} over 0..{m - 1}", source=source, line=number)
        words.append(word)
    return ConstantWeightCode(n, m, k, tuple(words))


def read_code(path: Union[str, Path]) -> ConstantWeightCode:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read code file: {exc.strerror}", source=str(path)) from None
    return parse_code(text, source=str(path))
