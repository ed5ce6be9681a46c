from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from sts_numerics import QuadratureSpec, default_quadrature
from waveguide_analog import GuideGeometry, SweepSpec, cutoff_frequencies

from .errors import ConfigError

logger = logging.getLogger(__name__)

CONFIG_KEYS = (
    "b_mm",
    "b_prime_mm",
    "a_mm",
    "a_prime_mm",
    "length_cm",
    "lambda_mhz",
    "ell_m",
    "sweep_start_ghz",
    "sweep_stop_ghz",
    "sweep_step_mhz",
    "models",
    "baseline_averaging",
    "baseline_subtraction",
    "out_dir",
)
MODEL_ORDER = ("sts", "pt", "bl")
PRESETS_DIR = Path(__file__).resolve().parent / "presets"
DEFAULT_STEP_MHZ = 20.0


class ExperimentConfig(BaseModel):
    """One delay-sweep scenario, in the units of the config file.

    Sweep bounds left out default to ``[nu_out + 2 Lambda, nu_in + 1 GHz]``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    b_mm: float = Field(gt=0)
    b_prime_mm: float = Field(gt=0)
    a_mm: Optional[float] = Field(default=None, gt=0)
    a_prime_mm: Optional[float] = Field(default=None, gt=0)
    length_cm: float = Field(gt=0)
    lambda_mhz: float = Field(gt=0)
    ell_m: float = Field(default=0.0, ge=0)
    sweep_start_ghz: Optional[float] = Field(default=None, gt=0)
    sweep_stop_ghz: Optional[float] = Field(default=None, gt=0)
    sweep_step_mhz: float = Field(default=DEFAULT_STEP_MHZ, gt=0)
    models: Tuple[str, ...] = MODEL_ORDER
    baseline_averaging: bool = False
    baseline_subtraction: bool = False
    out_dir: str = "out"
    numerics: QuadratureSpec = Field(default_factory=default_quadrature)

    @field_validator("models", mode="before")
    @classmethod
    def _parse_models(cls, v: Any) -> Tuple[str, ...]:
        items = v.split(",") if isinstance(v, str) else list(v)
        names = {str(item).strip().lower() for item in items if str(item).strip()}
        unknown = sorted(names - set(MODEL_ORDER))
        if unknown:
            raise ValueError(f"unknown models {unknown}; expected a subset of {list(MODEL_ORDER)}")
        if not names:
            raise ValueError("at least one model is required")
        return tuple(m for m in MODEL_ORDER if m in names)

    @model_validator(mode="after")
    def _sweep_above_cutoff(self) -> "ExperimentConfig":
        if self.b_prime_mm > self.b_mm:
            raise ValueError(f"b_prime_mm={self.b_prime_mm} exceeds b_mm={self.b_mm}")
        nu_out = cutoff_frequencies(self.geometry()).nu_out
        sweep = self.sweep()
        if sweep.start <= nu_out:
            raise ValueError(
                f"sweep starts at {sweep.start / 1e9:.4f} GHz, below the outer cutoff {nu_out / 1e9:.4f} GHz"
            )
        return self

    def geometry(self) -> GuideGeometry:
        return GuideGeometry(
            b=self.b_mm * 1e-3,
            b_prime=self.b_prime_mm * 1e-3,
            a=None if self.a_mm is None else self.a_mm * 1e-3,
            a_prime=None if self.a_prime_mm is None else self.a_prime_mm * 1e-3,
            length=self.length_cm * 1e-2,
        )

    @property
    def lambda_hwhm(self) -> float:
        return self.lambda_mhz * 1e6

    def sweep(self) -> SweepSpec:
        cut = cutoff_frequencies(self.geometry())
        start = self.sweep_start_ghz * 1e9 if self.sweep_start_ghz is not None else cut.nu_out + 2 * self.lambda_hwhm
        stop = self.sweep_stop_ghz * 1e9 if self.sweep_stop_ghz is not None else cut.nu_in + 1e9
        return SweepSpec(start=start, stop=stop, step=self.sweep_step_mhz * 1e6)

    def with_overrides(self, **updates: Any) -> "ExperimentConfig":
        """Copy with validated overrides (CLI flags)."""
        values = {k: v for k, v in updates.items() if v is not None}
        if not values:
            return self
        return ExperimentConfig.model_validate({**self.model_dump(), **values})


def _key_lines(text: str, source: str) -> Dict[str, int]:
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"{source}: {exc}", None if mark is None else mark.line + 1) from exc
    if root is None:
        raise ConfigError(f"{source}: empty configuration")
    if not isinstance(root, yaml.MappingNode):
        raise ConfigError(f"{source}: expected flat key: value pairs", root.start_mark.line + 1)
    lines: Dict[str, int] = {}
    for key_node, value_node in root.value:
        key, line = str(key_node.value), key_node.start_mark.line + 1
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}", line)
        if key in lines:
            raise ConfigError(f"duplicate key {key!r}", line)
        if not isinstance(value_node, yaml.ScalarNode):
            raise ConfigError(f"value of {key!r} must be a scalar", line)
        lines[key] = line
    return lines


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    lines = _key_lines(text, source)
    data = yaml.safe_load(text)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        key = str(first["loc"][0]) if first["loc"] else None
        raise ConfigError(f"{source}: {key or 'config'}: {first['msg']}", lines.get(key or "")) from exc


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    cfg = parse_config(path.read_text(encoding="utf-8"), source=str(path))
    logger.info("config loaded | path=%s models=%s", path, ",".join(cfg.models))
    return cfg


def load_preset(name: str) -> ExperimentConfig:
    path = PRESETS_DIR / f"{name}.yaml"
    if not path.is_file():
        available = sorted(p.stem for p in PRESETS_DIR.glob("*.yaml"))
        raise ConfigError(f"unknown scenario {name!r}; available: {', '.join(available)}")
    return load_config(path)
