"""
Ringline - Divisible Designs
Incidence model, exhaustive axiom verification and the derived-parameter
calculus
"""

import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ...core.config import settings
from ...core.exceptions import CapExceededError, InternalConsistencyError, InvalidParameterError
from ...utils.helpers import as_integer, transversal_count
from ...utils.parallel import ordered_map, shards

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]


@dataclass(frozen=True)
class DDParams:
    t: int
    s: int
    k: int
    lambda_t: int

    def __str__(self) -> str:
        return f"{self.t}-({self.s},{self.k},{self.lambda_t})"


@dataclass(frozen=True)
class DerivedParams:
    b: int
    r: int
    lambdas: Tuple[int, ...]  # lambda_0 .. lambda_t


@dataclass(frozen=True)
class Violation:
    axiom: str
    message: str
    witness: Dict[str, object] = field(default_factory=dict)

    def __str__(self) -> str:
        return f"axiom ({self.axiom}) violated: {self.message}"


@dataclass(frozen=True, eq=False)
class Design:
    """Points 0..v-1 partitioned into classes, with a set of blocks.

    ``params`` and ``derived`` are filled only by a successful verify_dd.
    """

    v: int
    classes: Tuple[Block, ...]
    blocks: Tuple[Block, ...]
    params: Optional[DDParams] = None
    derived: Optional[DerivedParams] = None
    labels: Optional[Tuple[str, ...]] = None
    metadata: Mapping[str, str] = field(default_factory=dict)

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @cached_property
    def class_of(self) -> np.ndarray:
        owner = np.empty(self.v, dtype=np.int64)
        for i, members in enumerate(self.classes):
            owner[list(members)] = i
        return owner

    @cached_property
    def degrees(self) -> np.ndarray:
        counts = np.zeros(self.v, dtype=np.int64)
        for block in self.blocks:
            counts[list(block)] += 1
        return counts

    @property
    def transversal(self) -> bool:
        return self.params is not None and self.params.k * self.params.s == self.v

    def point_label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)


def make_design(
    v: int,
    classes: Sequence[Sequence[int]],
    blocks: Sequence[Sequence[int]],
    *,
    labels: Optional[Sequence[str]] = None,
    metadata: Optional[Mapping[str, str]] = None,
) -> Design:
    """Normalize and check incidence data: classes partition the points, blocks are distinct sets."""
    classes = tuple(sorted(tuple(sorted(int(x) for x in c)) for c in classes))
    seen = [x for c in classes for x in c]
    if sorted(seen) != list(range(v)):
        raise InvalidParameterError(f"classes do not partition the points 0..{v - 1}")
    normal = []
    for block in blocks:
        members = tuple(sorted(int(x) for x in block))
        if not members or len(set(members)) != len(members):
            raise InvalidParameterError(f"block {tuple(block)} is empty or repeats a point")
        if members[0] < 0 or members[-1] >= v:
            raise InvalidParameterError(f"block {members} has a point outside 0..{v - 1}")
        normal.append(members)
    normal.sort()
    for a, b in zip(normal, normal[1:]):
        if a == b:
            raise InvalidParameterError(f"repeated block {a}")
    if labels is not None and len(labels) != v:
        raise InvalidParameterError(f"expected {v} point labels")
    return Design(v, classes, tuple(normal), labels=tuple(labels) if labels else None, metadata=dict(metadata or {}))


@dataclass(frozen=True)
class Verification:
    ok: bool
    design: Optional[Design] = None
    violation: Optional[Violation] = None

    @property
    def params(self) -> Optional[DDParams]:
        return self.design.params if self.design else None


def transversal_subsets(design: Design, t: int) -> Iterator[Block]:
    """Class-transversal t-subsets in lexicographic order."""
    owner = design.class_of
    chosen: List[int] = []
    used: set = set()

    def extend(start: int) -> Iterator[Block]:
        if len(chosen) == t:
            yield tuple(chosen)
            return
        for x in range(start, design.v - (t - len(chosen)) + 1):
            c = int(owner[x])
            if c in used:
                continue
            chosen.append(x)
            used.add(c)
            yield from extend(x + 1)
            chosen.pop()
            used.discard(c)

    return extend(0)


def _count_subsets(blocks: Sequence[Block], t: int) -> Counter:
    counts: Counter = Counter()
    for block in blocks:
        counts.update(combinations(block, t))
    return counts


def derive_lambda_i(params: DDParams, v: int, i: int) -> Fraction:
    """lambda_i = lambda_t * C(v/s - i, t - i) * s^(t-i) / C(k - i, t - i)."""
    t, s, k = params.t, params.s, params.k
    if not 0 <= i <= t:
        raise InvalidParameterError(f"i must lie in 0..{t}, got {i}")
    if v % s:
        raise InvalidParameterError(f"class size {s} does not divide v={v}")
    n = v // s
    return Fraction(params.lambda_t * comb(n - i, t - i) * s ** (t - i), comb(k - i, t - i))


def _degree_message(design: Design) -> Tuple[str, Dict[str, int]]:
    degrees = design.degrees
    first = 0
    other = np.flatnonzero(degrees != degrees[first])
    by_label = {design.point_label(x): int(degrees[x]) for x in range(design.v)}
    if not other.size:
        return f"every point lies on {int(degrees[0])} blocks", by_label
    x = int(other[0])
    plural = lambda d: f"{d} block" if d == 1 else f"{d} blocks"
    message = (f"point {design.point_label(first)} lies on {plural(int(degrees[first]))}, "
               f"point {design.point_label(x)} on {plural(int(degrees[x]))}")
    return message, by_label


def verify_dd(
    design: Design,
    t: int,
    *,
    threads: Optional[int] = None,
    subset_cap: Optional[int] = None,
) -> Verification:
    """Check axioms (A), (B), (D) and (C) exhaustively.

    On success the returned design carries its parameters, with every
    lambda_i from the closed form and b, r re-counted directly.
    """
    if t < 1:
        raise InvalidParameterError(f"t must be at least 1, got {t}")
    if not design.blocks:
        return Verification(False, violation=Violation("C", "the design has no blocks", {}))
    owner = design.class_of

    k = len(design.blocks[0])
    for block in design.blocks:
        if len(block) != k:
            return Verification(False, violation=Violation(
                "A", f"block {block} has {len(block)} points, expected {k}",
                {"block": block, "size": len(block), "expected": k}))
        hit = owner[list(block)]
        if np.unique(hit).size != k:
            repeated = int(np.flatnonzero(np.bincount(hit) > 1)[0])
            return Verification(False, violation=Violation(
                "A", f"block {block} meets class {design.classes[repeated]} twice",
                {"block": block, "class": design.classes[repeated]}))

    s = len(design.classes[0])
    for members in design.classes:
        if len(members) != s:
            detail, degrees = _degree_message(design)
            return Verification(False, violation=Violation(
                "B", f"class {members} has {len(members)} points, expected {s}; {detail}",
                {"class": members, "size": len(members), "expected": s, "degrees": degrees}))

    n = design.class_count
    if t > n:
        return Verification(False, violation=Violation(
            "D", f"t={t} exceeds the number of classes {n}", {"t": t, "classes": n}))

    total = transversal_count(n, s, t)
    cap = settings.subset_cap if subset_cap is None else subset_cap
    if total > cap:
        raise CapExceededError(f"{total} transversal {t}-subsets exceed the cap {cap}")
    workers = settings.threads if threads is None else threads
    counts: Counter = Counter()
    for part in ordered_map(lambda chunk: _count_subsets(chunk, t), shards(design.blocks, workers), workers):
        counts.update(part)

    first = next(transversal_subsets(design, t))
    lam = counts.get(first, 0)
    if lam == 0 or len(counts) != total or any(c != lam for c in counts.values()):
        for subset in transversal_subsets(design, t):
            c = counts.get(subset, 0)
            if c != lam or c == 0:
                expected = f", {first} on {lam}" if subset != first else ""
                return Verification(False, violation=Violation(
                    "C", f"transversal {t}-set {subset} lies on {c} blocks{expected}",
                    {"subset": subset, "count": c, "expected": lam}))
        raise InternalConsistencyError("subset counts disagree but no deviating subset was found")

    params = DDParams(t, s, k, lam)
    lambdas = []
    for i in range(t + 1):
        value = as_integer(derive_lambda_i(params, design.v, i))
        if value is None:
            raise InternalConsistencyError(f"lambda_{i} of certified {params} is not an integer")
        lambdas.append(value)
    b, r = lambdas[0], lambdas[1]
    if b != design.b:
        raise InternalConsistencyError(f"{params}: formula gives b={b}, counted {design.b}")
    if (design.degrees != r).any():
        raise InternalConsistencyError(f"{params}: formula gives r={r}, counted {sorted(set(design.degrees.tolist()))}")
    if b * k != r * design.v or (t >= 2 and r * (k - 1) != lambdas[2] * (design.v - s)):
        raise InternalConsistencyError(f"{params}: parameter identities fail")
    certified = replace(design, params=params, derived=DerivedParams(b, r, tuple(lambdas)))
    logger.info("Certified %s with v=%d b=%d", params, design.v, b)
    return Verification(True, design=certified)


def maximal_t(design: Design) -> int:
    """Largest t at which the design certifies, 0 when it fails at t=1."""
    best = 0
    for t in range(1, design.class_count + 1):
        try:
            if not verify_dd(design, t).ok:
                break
        except CapExceededError:
            break
        best = t
    return best
