"""
Ringline - Finite Rings
"""

from .builders import build_ring, spec_order
from .structure import (
    center_of,
    find_subfield,
    is_dedekind_finite,
    is_local,
    jacobson_radical,
    nilpotency_index,
    quotient_by_radical,
    units_of,
    wedderburn_signature,
)
from .table import (
    AxiomViolation,
    RingHom,
    RingTable,
    check_ring_axioms,
    make_ring,
    read_table_ring,
    validate_ring_tables,
    write_table_ring,
)

# Export
__all__ = [
    "build_ring",
    "spec_order",
    "center_of",
    "find_subfield",
    "is_dedekind_finite",
    "is_local",
    "jacobson_radical",
    "nilpotency_index",
    "quotient_by_radical",
    "units_of",
    "wedderburn_signature",
    "AxiomViolation",
    "RingHom",
    "RingTable",
    "check_ring_axioms",
    "make_ring",
    "read_table_ring",
    "validate_ring_tables",
    "write_table_ring",
]
