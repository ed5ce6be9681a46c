"""Digitised delay measurements: ``nu_ghz,delay_ns,run`` CSV files."""

from __future__ import annotations

import csv
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .errors import DatasetError

logger = logging.getLogger(__name__)

HEADER = ("nu_ghz", "delay_ns", "run")


class DataPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    nu: float = Field(gt=0)
    delay: float

    @field_validator("delay")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("delay must be finite")
        return v


class DataSet(BaseModel):
    """One run of measurements in SI units, sorted by frequency."""

    model_config = ConfigDict(frozen=True)

    run: str = ""
    points: List[DataPoint] = Field(default_factory=list)

    @field_validator("points")
    @classmethod
    def _increasing(cls, points: List[DataPoint]) -> List[DataPoint]:
        nus = [p.nu for p in points]
        if any(b <= a for a, b in zip(nus, nus[1:])):
            raise ValueError("frequencies must be strictly increasing within a run")
        return points

    @property
    def empty(self) -> bool:
        return not self.points

    @property
    def frequencies(self) -> List[float]:
        return [p.nu for p in self.points]


def _parse_float(raw: Optional[str], column: str, row: int) -> float:
    try:
        value = float((raw or "").strip())
    except ValueError as exc:
        raise DatasetError(f"{column}={raw!r} is not a number", row) from exc
    if not math.isfinite(value):
        raise DatasetError(f"{column}={raw!r} is not finite", row)
    return value


def load_datasets(path: str | Path) -> List[DataSet]:
    """One ``DataSet`` per ``run`` label, in order of first appearance."""
    path = Path(path)
    rows: Dict[str, Dict[float, int]] = {}
    values: Dict[str, Dict[float, float]] = {}
    with path.open(encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != HEADER:
            raise DatasetError(f"{path}: header must be {','.join(HEADER)}, got {reader.fieldnames}", 1)
        for record in reader:
            row = reader.line_num
            if None in record or any(record.get(c) is None for c in HEADER):
                raise DatasetError(f"expected {len(HEADER)} fields", row)
            nu = _parse_float(record["nu_ghz"], "nu_ghz", row) * 1e9
            delay = _parse_float(record["delay_ns"], "delay_ns", row) * 1e-9
            if nu <= 0:
                raise DatasetError(f"nu_ghz must be positive, got {record['nu_ghz']!r}", row)
            run = (record["run"] or "").strip()
            seen = rows.setdefault(run, {})
            if nu in seen:
                raise DatasetError(f"frequency {record['nu_ghz']} GHz repeats row {seen[nu]} in run {run!r}", row)
            seen[nu] = row
            values.setdefault(run, {})[nu] = delay
    datasets = [
        DataSet(run=run, points=[DataPoint(nu=nu, delay=by_nu[nu]) for nu in sorted(by_nu)])
        for run, by_nu in values.items()
    ]
    if not datasets:
        logger.warning("dataset has no rows | path=%s", path)
    logger.info("dataset loaded | path=%s runs=%d points=%d", path, len(datasets), sum(len(d.points) for d in datasets))
    return datasets


def load_dataset(path: str | Path, run: Optional[str] = None) -> DataSet:
    """Single run from a data file; ``run`` selects one when the file holds several."""
    datasets = load_datasets(path)
    if not datasets:
        return DataSet(run=run or "")
    if run is not None:
        for data in datasets:
            if data.run == run:
                return data
        raise DatasetError(f"{path}: no run labelled {run!r}")
    if len(datasets) > 1:
        labels = ", ".join(d.run for d in datasets)
        raise DatasetError(f"{path}: holds runs {labels}; choose one or load them all")
    return datasets[0]
