from __future__ import annotations

import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SPEED_OF_LIGHT = 2.998e8


class GuideGeometry(BaseModel):
    """Rectangular guide of height ``b`` narrowed to ``b_prime`` over ``length``.

    Only the TE01 mode is modelled, so the widths are carried as metadata.
    ``b_prime == b`` is the empty guide (no barrier).
    """

    model_config = ConfigDict(frozen=True)

    b: float = Field(gt=0)
    b_prime: float = Field(gt=0)
    a: Optional[float] = Field(default=None, gt=0)
    a_prime: Optional[float] = Field(default=None, gt=0)
    length: float = Field(gt=0)
    c: float = Field(default=SPEED_OF_LIGHT, gt=0)

    @model_validator(mode="after")
    def _narrowed(self) -> "GuideGeometry":
        if self.b_prime > self.b:
            raise ValueError(f"narrowed height b_prime={self.b_prime} exceeds b={self.b}")
        return self

    def without_barrier(self) -> "GuideGeometry":
        return self.model_copy(update={"b_prime": self.b})


class Cutoffs(BaseModel):
    model_config = ConfigDict(frozen=True)

    nu_in: float = Field(gt=0)
    nu_out: float = Field(gt=0)
    c: float = Field(default=SPEED_OF_LIGHT, gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "Cutoffs":
        if self.nu_in < self.nu_out:
            raise ValueError("inner cutoff must not lie below the outer cutoff")
        return self

    @property
    def has_barrier(self) -> bool:
        return self.nu_in > self.nu_out


class SourceSpec(BaseModel):
    """Klystron line centred on ``nu_mu`` with scale ``lambda_hwhm``.

    ``ell`` is the path travelled before the narrowing. ``phase_model``
    selects how the line-shape phase enters the transmitted field:
    ``envelope`` keeps only the modulus of the printed amplitude,
    ``causal`` keeps its complex value.
    """

    model_config = ConfigDict(frozen=True)

    nu_mu: float = Field(gt=0)
    lambda_hwhm: float = Field(gt=0)
    ell: float = Field(default=0.0, ge=0)
    phase_model: Literal["envelope", "causal"] = "envelope"

    @field_validator("nu_mu", "lambda_hwhm", "ell")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("must be finite")
        return v


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    start: float = Field(gt=0)
    stop: float = Field(gt=0)
    step: float = Field(gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "SweepSpec":
        if self.stop < self.start:
            raise ValueError("sweep stop lies below its start")
        return self

    def frequencies(self) -> np.ndarray:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return self.start + self.step * np.arange(count)


class CurvePoint(BaseModel):
    nu: float
    delay: Optional[float] = None
    status: str = Field(default="ok", pattern=r"^(ok|infinite|failed)$")
    message: Optional[str] = None


class DelayCurve(BaseModel):
    model: str = Field(pattern=r"^(sts|pt|bl)$")
    points: List[CurvePoint] = Field(default_factory=list)

    @field_validator("points")
    @classmethod
    def _increasing(cls, points: List[CurvePoint]) -> List[CurvePoint]:
        nus = [p.nu for p in points]
        if any(b <= a for a, b in zip(nus, nus[1:])):
            raise ValueError("curve frequencies must be strictly increasing")
        return points

    def value_at(self, nu: float) -> Optional[float]:
        for point in self.points:
            if point.nu == nu:
                return point.delay if point.status == "ok" else None
        return None
