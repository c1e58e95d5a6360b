"""
Ringline - Ring Tables
Finite rings as exact operation tables over element indices
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ...core.config import settings
from ...core.exceptions import FormatError, InternalConsistencyError, RingAxiomError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AxiomViolation:
    """First ring axiom a pair of tables breaks, with the offending elements"""

    axiom: str
    witness: Tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.axiom} fails at {self.witness}"


@dataclass(frozen=True, eq=False)
class RingTable:
    """An immutable finite ring.

    Elements are the indices 0..order-1; ``add`` and ``mul`` are read-only
    order x order tables. Derived metadata is computed once by ``make_ring``.
    """

    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    zero_index: int
    one_index: int
    labels: Tuple[str, ...]
    unit_mask: np.ndarray
    inverse: np.ndarray
    radical_mask: np.ndarray
    is_commutative: bool
    char: int
    name: str = ""
    coefficients: Optional["RingHom"] = None

    @property
    def order(self) -> int:
        return len(self.labels)

    @property
    def units(self) -> frozenset:
        return frozenset(int(u) for u in np.flatnonzero(self.unit_mask))

    @property
    def radical(self) -> frozenset:
        return frozenset(int(r) for r in np.flatnonzero(self.radical_mask))

    @property
    def unit_list(self) -> np.ndarray:
        return np.flatnonzero(self.unit_mask)

    @property
    def is_local(self) -> bool:
        return self.order - int(self.unit_mask.sum()) == int(self.radical_mask.sum())

    @property
    def is_field(self) -> bool:
        return int(self.unit_mask.sum()) == self.order - 1 and self.is_commutative

    def index(self, label: Union[str, int]) -> int:
        """Element index from a label or an integer index."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= int(label) < self.order:
                raise KeyError(label)
            return int(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def sub(self, a: int, b: int) -> int:
        return int(self.add[a, self.neg[b]])

    def __repr__(self) -> str:
        return f"RingTable({self.name or '?'}, order={self.order})"


@dataclass(frozen=True, eq=False)
class RingHom:
    domain: RingTable
    codomain: RingTable
    map: np.ndarray

    def is_homomorphism(self) -> bool:
        d, c, f = self.domain, self.codomain, self.map
        return (
            f[d.zero_index] == c.zero_index
            and f[d.one_index] == c.one_index
            and np.array_equal(f[d.add], c.add[f[:, None], f[None, :]])
            and np.array_equal(f[d.mul], c.mul[f[:, None], f[None, :]])
        )

    @property
    def is_injective(self) -> bool:
        return np.unique(self.map).size == self.map.size

    @property
    def image(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in np.unique(self.map))

    def kernel(self) -> frozenset:
        return frozenset(int(x) for x in np.flatnonzero(self.map == self.codomain.zero_index))


def _identity(table: np.ndarray) -> Optional[int]:
    idx = np.arange(table.shape[0])
    hits = np.flatnonzero((table == idx[None, :]).all(axis=1) & (table == idx[:, None]).all(axis=0))
    return int(hits[0]) if hits.size else None


def _first_failure(
    op_check, order: int, exhaustive: bool, samples: int, seed: int
) -> Optional[Tuple[int, int, int]]:
    """Run a vectorized triple check; return the first failing (a, b, c)."""
    if exhaustive:
        b_grid, c_grid = np.meshgrid(np.arange(order), np.arange(order), indexing="ij")
        for a in range(order):
            bad = np.argwhere(~op_check(np.full_like(b_grid, a), b_grid, c_grid))
            if bad.size:
                b, c = bad[0]
                return (a, int(b), int(c))
        return None
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, order, size=(3, samples))
    bad = np.flatnonzero(~op_check(a, b, c))
    if bad.size:
        i = bad[0]
        return (int(a[i]), int(b[i]), int(c[i]))
    return None


def check_ring_axioms(
    add: np.ndarray,
    mul: np.ndarray,
    *,
    exhaustive: Optional[bool] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> Optional[AxiomViolation]:
    """Return the first violated ring axiom, or None when the tables form a ring.

    Triple axioms are checked exhaustively for small orders and on a seeded
    random sample of triples above ``settings.exhaustive_axiom_limit``.
    """
    add = np.asarray(add)
    mul = np.asarray(mul)
    n = add.shape[0] if add.ndim == 2 else 0
    if add.ndim != 2 or add.shape != (n, n) or mul.shape != (n, n) or n == 0:
        return AxiomViolation("square tables of equal order", ())
    if add.min() < 0 or add.max() >= n or mul.min() < 0 or mul.max() >= n:
        return AxiomViolation("entries are element indices", ())
    if exhaustive is None:
        exhaustive = n <= settings.exhaustive_axiom_limit
    samples = settings.axiom_samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    logger.debug("Checking ring axioms on order %d (%s)", n, "exhaustive" if exhaustive else "sampled")

    zero = _identity(add)
    if zero is None:
        return AxiomViolation("additive identity", ())
    bad = np.argwhere(add != add.T)
    if bad.size:
        return AxiomViolation("additive commutativity", tuple(int(x) for x in bad[0]))
    hit = _first_failure(lambda a, b, c: add[add[a, b], c] == add[a, add[b, c]], n, exhaustive, samples, seed)
    if hit:
        return AxiomViolation("additive associativity", hit)
    missing = np.flatnonzero(~(add == zero).any(axis=1))
    if missing.size:
        return AxiomViolation("additive inverse", (int(missing[0]),))
    one = _identity(mul)
    if one is None:
        return AxiomViolation("multiplicative identity", ())
    if one == zero:
        return AxiomViolation("1 != 0", (one,))
    hit = _first_failure(
        lambda a, b, c: mul[a, add[b, c]] == add[mul[a, b], mul[a, c]], n, exhaustive, samples, seed
    )
    if hit:
        return AxiomViolation("left distributivity", hit)
    hit = _first_failure(
        lambda a, b, c: mul[add[a, b], c] == add[mul[a, c], mul[b, c]], n, exhaustive, samples, seed
    )
    if hit:
        return AxiomViolation("right distributivity", hit)
    hit = _first_failure(lambda a, b, c: mul[mul[a, b], c] == mul[a, mul[b, c]], n, exhaustive, samples, seed)
    if hit:
        return AxiomViolation("multiplicative associativity", hit)
    return None


def unit_and_inverse(mul: np.ndarray, one: int) -> Tuple[np.ndarray, np.ndarray]:
    """Two-sided units and their inverses (-1 for non-units)."""
    hits = (mul == one) & (mul == one).T
    mask = hits.any(axis=1)
    inverse = np.where(mask, hits.argmax(axis=1), -1)
    return mask, inverse


def radical_of(add: np.ndarray, mul: np.ndarray, neg: np.ndarray, one: int, unit_mask: np.ndarray) -> np.ndarray:
    """Mask of { b : 1 - ab is a unit for every a }."""
    one_minus = add[one, neg]
    return unit_mask[one_minus[mul]].all(axis=0)


def _characteristic(add: np.ndarray, zero: int, one: int) -> int:
    k, x = 1, one
    while x != zero:
        x = int(add[x, one])
        k += 1
    return k


def _read_only(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=np.int32 if array.dtype != bool else bool)
    array.setflags(write=False)
    return array


def make_ring(
    add: np.ndarray,
    mul: np.ndarray,
    labels: Optional[Sequence[str]] = None,
    *,
    name: str = "",
    validate: bool = True,
    exhaustive: Optional[bool] = None,
    coefficients: Optional[Tuple["RingTable", np.ndarray]] = None,
) -> RingTable:
    """Build a RingTable from raw tables, deriving units, radical and metadata."""
    add = np.asarray(add, dtype=np.int64)
    mul = np.asarray(mul, dtype=np.int64)
    if validate:
        violation = check_ring_axioms(add, mul, exhaustive=exhaustive)
        if violation is not None:
            raise RingAxiomError(violation.axiom, violation.witness)
    n = add.shape[0]
    zero = _identity(add)
    one = _identity(mul)
    neg = np.argmax(add == zero, axis=1)
    unit_mask, inverse = unit_and_inverse(mul, one)
    rad = radical_of(add, mul, neg, one, unit_mask)
    if labels is None:
        labels = [str(i) for i in range(n)]
    ring = RingTable(
        add=_read_only(add),
        mul=_read_only(mul),
        neg=_read_only(neg),
        zero_index=int(zero),
        one_index=int(one),
        labels=tuple(labels),
        unit_mask=_read_only(unit_mask),
        inverse=_read_only(inverse),
        radical_mask=_read_only(rad),
        is_commutative=bool(np.array_equal(mul, mul.T)),
        char=_characteristic(add, zero, one),
        name=name,
    )
    if coefficients is not None:
        field, mapping = coefficients
        hom = RingHom(field, ring, _read_only(np.asarray(mapping)))
        if not hom.is_homomorphism():
            raise InternalConsistencyError(f"coefficient embedding of {name} is not a ring homomorphism")
        object.__setattr__(ring, "coefficients", hom)
    return ring


def validate_ring_tables(
    add: np.ndarray,
    mul: np.ndarray,
    labels: Optional[Sequence[str]] = None,
    *,
    name: str = "table",
) -> RingTable:
    """Certify raw tables, always exhaustively; raises RingAxiomError with a witness."""
    return make_ring(add, mul, labels, name=name, exhaustive=True)


# ========== Table-ring file format ==========
#
#   ring <order>
#   labels
#   <order whitespace-separated labels>
#   add
#   <order rows of order indices>
#   mul
#   <order rows of order indices>
#
# Lines starting with '#' and blank lines are ignored.

def _read_tables(text: str, source: str):
    lines = [
        (number, line.split())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines or len(lines[0][1]) != 2 or lines[0][1][0] != "ring":
        raise FormatError("expected header 'ring <order>'", source=source, line=lines[0][0] if lines else None)
    try:
        n = int(lines[0][1][1])
    except ValueError:
        raise FormatError("ring order must be an integer", source=source, line=lines[0][0]) from None
    if n < 1:
        raise FormatError("ring order must be positive", source=source, line=lines[0][0])
    pos = 1

    def expect(keyword: str) -> None:
        nonlocal pos
        if pos >= len(lines) or lines[pos][1] != [keyword]:
            raise FormatError(f"expected section '{keyword}'", source=source,
                              line=lines[pos][0] if pos < len(lines) else None)
        pos += 1

    expect("labels")
    labels = []
    while len(labels) < n and pos < len(lines) and lines[pos][1] != ["add"]:
        labels.extend(lines[pos][1])
        pos += 1
    if len(labels) != n or len(set(labels)) != n:
        raise FormatError(f"expected {n} distinct labels", source=source)

    def matrix(keyword: str) -> np.ndarray:
        nonlocal pos
        expect(keyword)
        rows = []
        for _ in range(n):
            if pos >= len(lines):
                raise FormatError(f"section '{keyword}' ends early", source=source)
            number, tokens = lines[pos]
            try:
                row = [int(tok) for tok in tokens]
            except ValueError:
                raise FormatError("non-integer entry", source=source, line=number) from None
            if len(row) != n or min(row) < 0 or max(row) >= n:
                raise FormatError(f"row must hold {n} indices in 0..{n - 1}", source=source, line=number)
            rows.append(row)
            pos += 1
        return np.array(rows, dtype=np.int64)

    add = matrix("add")
    mul = matrix("mul")
    if pos != len(lines):
        raise FormatError("trailing content after 'mul' section", source=source, line=lines[pos][0])
    return add, mul, labels


def read_table_ring(path: Union[str, Path]) -> RingTable:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise FormatError(f"cannot read table ring: {e}", source=str(path)) from None
    add, mul, labels = _read_tables(text, str(path))
    ring = validate_ring_tables(add, mul, labels, name=f"table({path})")
    logger.info("Loaded table ring %s of order %d", path, ring.order)
    return ring


def table_ring_order(path: Union[str, Path]) -> int:
    """Order declared in a table-ring file header, without building the ring."""
    path = Path(path)
    try:
        with path.open() as handle:
            for line in handle:
                tokens = line.split()
                if tokens and not tokens[0].startswith("#"):
                    if len(tokens) == 2 and tokens[0] == "ring":
                        return int(tokens[1])
                    break
    except (OSError, ValueError) as e:
        raise FormatError(f"cannot read table ring header: {e}", source=str(path)) from None
    raise FormatError("expected header 'ring <order>'", source=str(path), line=1)


def write_table_ring(ring: RingTable) -> str:
    out = [f"ring {ring.order}", "labels", " ".join(ring.labels), "add"]
    out += [" ".join(str(x) for x in row) for row in ring.add]
    out.append("mul")
    out += [" ".join(str(x) for x in row) for row in ring.mul]
    return "\n".join(out) + "\n"
