from __future__ import annotations

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class QuadratureSpec(BaseModel):
    """Tolerances shared by every integral in the models."""

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default=1e-9, gt=0, lt=1)
    abs_tol: float = Field(default=1e-14, gt=0)
    max_subdivisions: int = Field(default=10_000, gt=0)
    tail_fraction: float = Field(default=1e-3, gt=0, lt=1)
    truncation_multiplier: float = Field(default=200.0, gt=0)


class NumericsReport(BaseModel):
    error_estimate: float = 0.0
    subdivisions: int = 0
    truncation_point: Optional[float] = None
    warnings: List[str] = Field(default_factory=list)

    @field_validator("error_estimate")
    @classmethod
    def _non_negative(cls, v: float) -> float:
        if v < 0:
            raise ValueError("error estimate must be non-negative")
        return v

    def merged(self, other: "NumericsReport") -> "NumericsReport":
        return NumericsReport(
            error_estimate=self.error_estimate + other.error_estimate,
            subdivisions=self.subdivisions + other.subdivisions,
            truncation_point=other.truncation_point if other.truncation_point is not None else self.truncation_point,
            warnings=[*self.warnings, *other.warnings],
        )
