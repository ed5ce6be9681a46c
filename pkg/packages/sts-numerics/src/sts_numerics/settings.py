from __future__ import annotations

from pydantic_settings import BaseSettings, SettingsConfigDict

from .model import QuadratureSpec


class NumericsSettings(BaseSettings):
    """Environment overrides for the quadrature defaults (``STS_QUAD_REL_TOL`` etc.)."""

    model_config = SettingsConfigDict(env_prefix="STS_QUAD_")

    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    max_subdivisions: int = 10_000
    tail_fraction: float = 1e-3
    truncation_multiplier: float = 200.0

    def to_spec(self) -> QuadratureSpec:
        return QuadratureSpec(**self.model_dump())


def default_quadrature() -> QuadratureSpec:
    return NumericsSettings().to_spec()
