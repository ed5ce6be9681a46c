"""Byte-stable CSV and SVG artefacts of a scenario run (GHz and ns on disk)."""

from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import numpy as np

from waveguide_analog import CurvePoint

from .config import MODEL_ORDER, ExperimentConfig
from .residues import ResidueReport
from .runner import ScenarioResult

logger = logging.getLogger(__name__)

GHZ = 1e9
NS = 1e-9
CURVES_HEADER = ("nu_ghz", "sts_ns", "pt_ns", "bl_ns")
RESIDUES_HEADER = ("model", "delta_raw", "delta_normalized", "run")
SVG_HASHSALT = "sts-delay"
# solid, short-dashed, long-dashed
LINE_STYLES = {"sts": "-", "pt": (0, (3, 2)), "bl": (0, (8, 3))}
LABELS = {"sts": "STS", "pt": "PT", "bl": "BL"}
RUN_MARKERS = (("o", "black"), ("s", "none"), ("^", "none"), ("D", "none"))


def _number(value: float) -> str:
    return f"{value:.10g}"


def _cell(point: CurvePoint) -> str:
    if point.status == "infinite":
        return "inf"
    if point.status == "failed" or point.delay is None:
        return "nan"
    return _number(point.delay / NS)


def _write_rows(path: Path, header: Iterable[str], rows: Iterable[Dict[str, str]]) -> None:
    fieldnames = list(header)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in fieldnames})


def write_curves_csv(result: ScenarioResult, path: Path) -> None:
    nus = [p.nu for p in next(iter(result.curves.values())).points]
    rows = []
    for i, nu in enumerate(nus):
        row = {"nu_ghz": _number(nu / GHZ)}
        for model, curve in result.curves.items():
            row[f"{model}_ns"] = _cell(curve.points[i])
        rows.append(row)
    _write_rows(path, CURVES_HEADER, rows)


def write_residues_csv(reports: List[ResidueReport], path: Path) -> None:
    rows = [
        {
            "model": entry.model,
            "delta_raw": _number(entry.delta_raw / NS),
            "delta_normalized": "" if entry.delta_normalized is None else _number(entry.delta_normalized),
            "run": report.run,
        }
        for report in reports
        for entry in report.entries
    ]
    _write_rows(path, RESIDUES_HEADER, rows)


def _ok_series(points: List[CurvePoint]) -> tuple[np.ndarray, np.ndarray]:
    ok = [(p.nu, p.delay) for p in points if p.status == "ok" and p.delay is not None]
    return np.array([nu / GHZ for nu, _ in ok]), np.array([delay / NS for _, delay in ok])


def render_figure(result: ScenarioResult, path: Path) -> None:
    """Delay against line centre, one series per model, data overlaid, cut-off marked."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rc = {"svg.hashsalt": SVG_HASHSALT, "font.family": "DejaVu Sans", "axes.unicode_minus": False}
    with matplotlib.rc_context(rc):
        fig, ax = plt.subplots(figsize=(6.4, 4.4), constrained_layout=True)
        reference: List[np.ndarray] = []
        for model in MODEL_ORDER:
            curve = result.curves.get(model)
            if curve is None:
                continue
            xs, ys = _ok_series(curve.points)
            ax.plot(xs, ys, color="black", linestyle=LINE_STYLES[model], linewidth=1.2, label=LABELS[model])
            if model != "bl" and ys.size:
                reference.append(ys)
        for run, (marker, face) in zip(result.data, RUN_MARKERS):
            if run.empty:
                continue
            xs = np.array([p.nu / GHZ for p in run.points])
            ys = np.array([p.delay / NS for p in run.points])
            ax.plot(
                xs,
                ys,
                linestyle="none",
                marker=marker,
                markerfacecolor=face,
                markeredgecolor="black",
                markersize=5,
                label=run.run or "data",
            )
            reference.append(ys)
        ax.axvline(result.nu_in / GHZ, color="0.4", linewidth=0.8, linestyle=":")

        bl = result.curves.get("bl")
        if bl is not None and reference:
            values = np.concatenate(reference)
            top = 1.5 * float(np.max(values))
            bottom = min(0.0, 1.5 * float(np.min(values)))
            ax.set_ylim(bottom, top)
            clipped = any(p.status == "infinite" or (p.delay is not None and p.delay / NS > top) for p in bl.points)
            if clipped:
                ax.annotate(
                    "BL clipped near cut-off",
                    xy=(result.nu_in / GHZ, top),
                    xytext=(4, -12),
                    textcoords="offset points",
                    fontsize=8,
                )
        ax.set_xlabel("mean frequency (GHz)")
        ax.set_ylabel("delay time (ns)")
        ax.legend(loc="best", fontsize=8, frameon=False)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def emit_outputs(result: ScenarioResult, cfg: ExperimentConfig, out_dir: Optional[Path] = None) -> List[Path]:
    """Write ``curves.csv``, ``figure.svg`` and, when data was given, ``residues.csv``."""
    out = Path(out_dir or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "curves.csv", out / "figure.svg"]
    write_curves_csv(result, written[0])
    render_figure(result, written[1])
    if result.reports:
        written.append(out / "residues.csv")
        write_residues_csv(result.reports, written[-1])
    logger.info("outputs written | dir=%s files=%s", out, ",".join(p.name for p in written))
    return written
