"""
Ringline - Report Schemas
Machine-readable command output; set-valued fields are sorted lists
"""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field


class RingInfoReport(BaseModel):
    """Structure of one ring"""

    spec: str = Field(..., description="Canonical ring-spec text")
    order: int
    characteristic: int
    units: List[str] = Field(..., description="Unit labels in element order")
    radical: List[str] = Field(..., description="Jacobson radical labels in element order")
    local: bool
    commutative: bool
    wedderburn: List[Tuple[int, int]] = Field(..., description="(m, q) factors of R/rad R")
    gl2_order: int
    line_points: int


class LineExport(BaseModel):
    """Full export of a projective line"""

    ring: str
    points: List[Tuple[str, str]] = Field(..., description="Canonical representative of each point, by label")
    distant: List[Tuple[int, int]] = Field(..., description="Distant pairs p < q")
    parallel_classes: List[List[int]]


class LineReport(BaseModel):
    ring: str
    points: int
    class_size: int
    distant_degree: int
    local: bool
    nondistant_is_equivalence: bool


class ChainReport(BaseModel):
    ring: str
    field: str
    strategy: str
    subfield: List[str] = Field(..., description="Labels of the embedded field elements in R")
    points: int
    chains: int
    chain_size: int
    lambda3: int = Field(..., description="Chains through a mutually distant triple, by direct count")
    normaliser_index: int
    gl2_order: int
    stabiliser_order: int


class ViolationReport(BaseModel):
    axiom: str
    message: str
    witness: Dict[str, object] = Field(default_factory=dict)


class DesignReport(BaseModel):
    t: int
    s: int
    k: int
    lambda_t: int
    v: int
    b: int
    r: int
    lambdas: List[int] = Field(..., description="lambda_0 .. lambda_t")
    transversal: bool
    metadata: Dict[str, str] = Field(default_factory=dict, description="Construction details: K, R, group and stabiliser orders")


class VerifyReport(BaseModel):
    ok: bool
    design: Optional[DesignReport] = None
    violation: Optional[ViolationReport] = None


class IsoReport(BaseModel):
    isomorphic: bool
    mapping: Optional[List[Tuple[int, int]]] = None
    maximal_t: Tuple[int, int]


class CodeReport(BaseModel):
    n: int
    m: int
    k: int
    words: int
    path: str


class CountReport(BaseModel):
    spec: str
    radical_size: int
    wedderburn: List[Tuple[int, int]]
    closed_form: int
    enumerated: Optional[int] = None
