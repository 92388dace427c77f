from __future__ import annotations

from typing import Any, Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, field_validator
from sympy import isprime

M = TypeVar("M", bound=BaseModel)


# ---- Chain complex document ----
class TermDoc(BaseModel):
    exp: List[int]
    coef: str

    @field_validator("coef")
    def _integral(cls, v: str) -> str:
        int(v)
        return v


# A matrix is a list of rows, a row a list of entries, an entry a list of terms.
MatrixDoc = List[List[List[TermDoc]]]


class ComplexDoc(BaseModel):
    m: int = Field(..., ge=0)
    top_degree: int = Field(..., ge=0)
    dims: List[int]
    differentials: List[MatrixDoc] = []

    @field_validator("dims")
    def _non_negative(cls, v: List[int]) -> List[int]:
        if any(d < 0 for d in v):
            raise ValueError("chain ranks must be non-negative")
        return v


# ---- Experiment configuration ----
class ExperimentConfig(BaseModel):
    """One CLI invocation; unset numeric options fall back to Settings."""
    model_config = ConfigDict(use_enum_values=True)

    command: str
    input_path: Optional[str] = None
    example: Optional[str] = None
    levels: List[int] = []
    moduli_pattern: Optional[str] = None
    primes: List[int] = []
    max_degree: Optional[int] = Field(None, ge=0)
    out: Optional[str] = None
    format: str = "csv"
    seed: Optional[int] = None
    jobs: Optional[int] = None
    suite: Optional[str] = None
    count: Optional[int] = Field(None, ge=0)
    threshold_alpha: Optional[float] = None
    torsion_tolerance: Optional[float] = None

    @field_validator("threshold_alpha", "torsion_tolerance")
    def _positive(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and v <= 0:
            raise ValueError("thresholds must be positive")
        return v

    @field_validator("primes")
    def _primes(cls, v: List[int]) -> List[int]:
        bad = [p for p in v if not isprime(p)]
        if bad:
            raise ValueError(f"not prime: {bad}")
        return v

    @field_validator("levels")
    def _levels(cls, v: List[int]) -> List[int]:
        if any(i < 1 for i in v):
            raise ValueError("tower levels must be >= 1")
        return v

    @field_validator("format")
    def _format(cls, v: str) -> str:
        if v not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        return v

    @field_validator("jobs")
    def _jobs(cls, v: Optional[int]) -> Optional[int]:
        return v if v is None else max(1, v)


def model_dump(model: BaseModel) -> Dict[str, Any]:
    return model.model_dump()


def parse_model(cls: Type[M], data: Dict[str, Any]) -> M:
    return cls.model_validate(data)
