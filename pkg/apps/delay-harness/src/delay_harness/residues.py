from __future__ import annotations

import logging
import math
from typing import Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel, Field

from sts_numerics import DegenerateInputError
from waveguide_analog import DelayCurve

from .dataset import DataSet

logger = logging.getLogger(__name__)


class ResidueEntry(BaseModel):
    model: str
    delta_raw: float = Field(ge=0)
    delta_normalized: Optional[float] = Field(default=None, ge=0, le=1)


class ResidueReport(BaseModel):
    """Root-sum-square misfit of every model against one run, the worst normalised to one."""

    run: str = ""
    entries: List[ResidueEntry] = Field(default_factory=list)
    normalizer: float = 0.0
    points_used: int = 0
    degenerate: bool = False

    def delta(self, model: str) -> Optional[float]:
        for entry in self.entries:
            if entry.model == model:
                return entry.delta_normalized
        raise KeyError(model)


def residues(data: DataSet, curves: Mapping[str, DelayCurve]) -> ResidueReport:
    """``delta_k = N^-1 sqrt(sum_i (y_i - f_k(x_i))^2)`` with ``N`` the largest raw residue.

    ``curves`` hold each model evaluated at exactly the data frequencies; a data
    point enters only if every model produced a finite value there.
    """
    if data.empty:
        raise DegenerateInputError(f"run {data.run!r} has no data points")
    if not curves:
        raise DegenerateInputError("no model curves to compare against")
    usable: List[Tuple[float, Dict[str, float]]] = []
    for point in data.points:
        predicted = [curve.value_at(point.nu) for curve in curves.values()]
        finite = [v for v in predicted if v is not None and math.isfinite(v)]
        if len(finite) == len(curves):
            usable.append((point.delay, dict(zip(curves, finite))))
    skipped = len(data.points) - len(usable)
    if skipped:
        logger.warning("residue points skipped | run=%s skipped=%d used=%d", data.run, skipped, len(usable))
    if not usable:
        raise DegenerateInputError(f"no data point of run {data.run!r} was evaluated by every model")

    raw = {model: math.sqrt(sum((y - f[model]) ** 2 for y, f in usable)) for model in curves}
    normalizer = max(raw.values())
    degenerate = normalizer == 0.0
    if degenerate:
        logger.warning("all residues vanish | run=%s", data.run)
    entries = [
        ResidueEntry(model=model, delta_raw=delta, delta_normalized=None if degenerate else delta / normalizer)
        for model, delta in raw.items()
    ]
    return ResidueReport(
        run=data.run, entries=entries, normalizer=normalizer, points_used=len(usable), degenerate=degenerate
    )
