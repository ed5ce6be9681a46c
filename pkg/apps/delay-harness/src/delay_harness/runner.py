from __future__ import annotations

import logging
import time
from typing import Callable, Dict, List, Optional, Sequence, cast

import numpy as np
from pydantic import BaseModel, Field

from baselines import BaselineModelTag, baseline_evaluator
from waveguide_analog import DelayCurve, cutoff_frequencies, delay_evaluator, sweep_curve, velocities

from .config import ExperimentConfig
from .dataset import DataSet
from .residues import ResidueReport, residues
from .settings import HarnessSettings

logger = logging.getLogger(__name__)


class ScenarioResult(BaseModel):
    curves: Dict[str, DelayCurve]
    reports: List[ResidueReport] = Field(default_factory=list)
    data: List[DataSet] = Field(default_factory=list)
    nu_in: float
    nu_out: float

    @property
    def failed_points(self) -> int:
        return sum(p.status == "failed" for curve in self.curves.values() for p in curve.points)


def model_evaluator(model: str, cfg: ExperimentConfig, settings: HarnessSettings) -> Callable[[float], float]:
    """Delay of ``model`` at one line centre, with the empty-guide transit removed when configured."""
    g = cfg.geometry()
    if model == "sts":
        evaluate = delay_evaluator(g, cfg.lambda_hwhm, cfg.ell_m, cfg.numerics, settings.source_phase)
    else:
        tag = cast(BaselineModelTag, model)
        evaluate = baseline_evaluator(tag, g, cfg.lambda_hwhm, cfg.numerics, cfg.baseline_averaging)
    if not cfg.baseline_subtraction:
        return evaluate
    cut = cutoff_frequencies(g)

    def subtracted(nu: float) -> float:
        _, v_group = velocities(nu, cut)
        return evaluate(nu) - g.length / float(v_group)

    return subtracted


def run_scenario(
    cfg: ExperimentConfig,
    data: DataSet | Sequence[DataSet] | None = None,
    settings: Optional[HarnessSettings] = None,
) -> ScenarioResult:
    """Every configured model over the sweep, and residues against each data run.

    Residues use the models evaluated at the data frequencies themselves.
    """
    settings = settings or HarnessSettings()
    runs: List[DataSet] = [data] if isinstance(data, DataSet) else list(data or [])
    started = time.perf_counter()
    cut = cutoff_frequencies(cfg.geometry())
    nus = cfg.sweep().frequencies()
    evaluators = {model: model_evaluator(model, cfg, settings) for model in cfg.models}
    curves = {model: sweep_curve(model, nus, evaluate, settings.workers) for model, evaluate in evaluators.items()}

    reports: List[ResidueReport] = []
    for run in runs:
        if run.empty:
            logger.warning("empty data run skipped | run=%s", run.run)
            continue
        frequencies = np.asarray(run.frequencies)
        at_data = {
            model: sweep_curve(model, frequencies, evaluate, settings.workers) for model, evaluate in evaluators.items()
        }
        reports.append(residues(run, at_data))

    result = ScenarioResult(curves=curves, reports=reports, data=runs, nu_in=cut.nu_in, nu_out=cut.nu_out)
    logger.info(
        "scenario done | models=%s points=%d runs=%d failed=%d elapsed_s=%.1f",
        ",".join(cfg.models),
        nus.size,
        len(reports),
        result.failed_points,
        time.perf_counter() - started,
    )
    return result
