"""
Ringline - Divisible Designs
"""

from .fileio import parse_design, read_design, write_design
from .isomorphism import dd_isomorphic, is_isomorphism, preserves_blocks_one_way
from .model import (
    DDParams,
    Design,
    DerivedParams,
    Verification,
    Violation,
    derive_lambda_i,
    make_design,
    maximal_t,
    transversal_subsets,
    verify_dd,
)
from .spera import (
    ChainProfile,
    SperaInput,
    chain_geometry_profile,
    laguerre_parameters,
    line_profile,
    spera_construct,
    spera_counterexample,
    spera_from_line,
    truncated_chain_design,
)

# Export
__all__ = [
    "parse_design",
    "read_design",
    "write_design",
    "dd_isomorphic",
    "is_isomorphism",
    "preserves_blocks_one_way",
    "DDParams",
    "Design",
    "DerivedParams",
    "Verification",
    "Violation",
    "derive_lambda_i",
    "make_design",
    "maximal_t",
    "transversal_subsets",
    "verify_dd",
    "ChainProfile",
    "SperaInput",
    "chain_geometry_profile",
    "laguerre_parameters",
    "line_profile",
    "spera_construct",
    "spera_counterexample",
    "spera_from_line",
    "truncated_chain_design",
]
