from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, field_validator


class BarrierSpec(BaseModel):
    """Rectangular barrier of height ``height`` occupying ``0 < x < length``.

    ``hbar`` and ``mass`` default to natural units; they stay explicit so the
    optical substitution is a matter of configuration.
    """

    model_config = ConfigDict(frozen=True)

    height: float = Field(ge=0)
    length: float = Field(gt=0)
    hbar: float = Field(default=1.0, gt=0)
    mass: float = Field(default=1.0, gt=0)

    @field_validator("height", "length", "hbar", "mass")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("must be finite")
        return v

    @property
    def threshold_wavenumber(self) -> float:
        """k0 = sqrt(2 m V0) / hbar, the outside wavenumber at the barrier top."""
        return math.sqrt(2.0 * self.mass * self.height) / self.hbar


class Wavenumbers(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: float = Field(ge=0)
    k1: complex

    @field_validator("k1")
    @classmethod
    def _decaying_branch(cls, v: complex) -> complex:
        v = complex(v)
        if v.imag < 0:
            raise ValueError("k1 must lie on the decaying branch (Im k1 >= 0)")
        return v
