"""
Ringline - Ring Specification Schema
Frozen pydantic AST for the ring-spec language
"""

from typing import Literal, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..utils.helpers import prime_power


class _Spec(BaseModel):
    model_config = ConfigDict(frozen=True)

    def text(self) -> str:  # pragma: no cover - overridden
        raise NotImplementedError

    def __str__(self) -> str:
        return self.text()


class Zmod(_Spec):
    """Integers modulo m"""

    kind: Literal["zmod"] = "zmod"
    m: int = Field(..., ge=2, description="Modulus")

    def text(self) -> str:
        return f"Z/{self.m}"


class GaloisField(_Spec):
    kind: Literal["gf"] = "gf"
    q: int = Field(..., description="Field order, a prime power")

    @field_validator("q")
    @classmethod
    def _prime_power(cls, q: int) -> int:
        if prime_power(q) is None:
            raise ValueError(f"GF({q}): {q} is not a prime power")
        return q

    def text(self) -> str:
        return f"GF({self.q})"


class DualNumbers(_Spec):
    """base[T]/(T^h)"""

    kind: Literal["dual"] = "dual"
    base: "RingSpec"
    h: int = Field(..., ge=2, description="Nilpotency degree; h=1 is the base ring itself")

    def text(self) -> str:
        return f"dual({self.base.text()}, h={self.h})"


class TwistedDual(_Spec):
    """Twisted dual numbers over GF(p^n) with twist x -> x^(p^j)"""

    kind: Literal["twisted"] = "twisted"
    base: "RingSpec"
    frobenius_power: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _non_identity(self) -> "TwistedDual":
        if not isinstance(self.base, GaloisField):
            raise ValueError("a twist needs a Galois field base")
        _, n = prime_power(self.base.q)
        if self.frobenius_power % n == 0:
            raise ValueError(
                f"frob={self.frobenius_power} induces the identity on GF({self.base.q})"
            )
        return self

    def text(self) -> str:
        return f"dual({self.base.text()}, h=2, frob={self.frobenius_power})"


class MatrixRing(_Spec):
    kind: Literal["mat"] = "mat"
    m: int = Field(..., ge=1)
    base: "RingSpec"

    def text(self) -> str:
        return f"mat({self.m}, {self.base.text()})"


class Product(_Spec):
    kind: Literal["prod"] = "prod"
    factors: Tuple["RingSpec", ...] = Field(..., min_length=1)

    def text(self) -> str:
        return "prod(" + ", ".join(f.text() for f in self.factors) + ")"


class TableRing(_Spec):
    kind: Literal["table"] = "table"
    path: str = Field(..., min_length=1)

    def text(self) -> str:
        if any(c in self.path for c in ')"') or self.path != self.path.strip():
            escaped = self.path.replace("\\", "\\\\").replace('"', '\\"')
            return f'table("{escaped}")'
        return f"table({self.path})"


class ExteriorAlgebra(_Spec):
    kind: Literal["ext"] = "ext"
    base: "RingSpec"
    n: int = Field(..., ge=1, description="Number of generators b1..bn")

    def text(self) -> str:
        return f"ext({self.base.text()}, n={self.n})"


RingSpec = Union[Zmod, GaloisField, DualNumbers, TwistedDual, MatrixRing, Product, TableRing, ExteriorAlgebra]

for _model in (DualNumbers, TwistedDual, MatrixRing, Product, ExteriorAlgebra):
    _model.model_rebuild()


__all__ = [
    "RingSpec",
    "Zmod",
    "GaloisField",
    "DualNumbers",
    "TwistedDual",
    "MatrixRing",
    "Product",
    "TableRing",
    "ExteriorAlgebra",
]
