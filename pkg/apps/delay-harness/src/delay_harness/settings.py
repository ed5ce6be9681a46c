from __future__ import annotations

from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class HarnessSettings(BaseSettings):
    """Run-time knobs outside the experiment file (``STS_SOURCE_PHASE``, ``STS_WORKERS``, ``STS_LOG_LEVEL``)."""

    model_config = SettingsConfigDict(env_prefix="STS_")

    source_phase: Literal["envelope", "causal"] = "envelope"
    workers: int = Field(default=1, ge=1)
    log_level: str = "INFO"
