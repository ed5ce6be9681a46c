"""Line-averaged forms of the baselines and their delay curves."""

from __future__ import annotations

import logging
import math
from typing import Callable, Literal, Optional, Tuple

import numpy as np

from sts_numerics import DegenerateInputError, QuadratureSpec, default_quadrature, integrate_adaptive
from waveguide_analog import (
    DelayCurve,
    GuideGeometry,
    OpticalAmplitude,
    SourceSpec,
    SweepSpec,
    cutoff_frequencies,
    guide_transmission,
    spectral_window,
    sweep_curve,
)
from waveguide_analog.optical import DEGENERATE_NORM, GHZ, NS

from .phase import phase_time
from .semiclassical import buttiker_landauer_strength, buttiker_landauer_time

logger = logging.getLogger(__name__)

BaselineModelTag = Literal["pt", "bl"]


def _pointwise(model: BaselineModelTag, g: GuideGeometry) -> Callable[[np.ndarray], np.ndarray]:
    if model == "pt":
        return lambda nu: np.asarray(phase_time(nu, g, check=False))
    if model == "bl":
        return lambda nu: np.asarray(buttiker_landauer_time(nu, g))
    raise ValueError(f"unknown baseline model {model!r}")


def _cutoff_side(
    amp: OpticalAmplitude,
    weight: Callable[[OpticalAmplitude, np.ndarray], np.ndarray],
    strength: Callable[[np.ndarray], np.ndarray],
    x_cut: float,
    x_far: float,
    edges: np.ndarray,
    quad: QuadratureSpec,
) -> Tuple[np.ndarray, int]:
    """Moments between the inner cutoff and ``x_far`` (GHz) with ``x = x_cut +/- u**2``.

    ``tau = strength / sqrt|nu - nu_in|``, so ``tau dx`` becomes ``2 strength du / sqrt(GHz)``.
    """
    sign = 1.0 if x_far > x_cut else -1.0
    inside = edges[(edges - x_cut) * sign > 0]

    def integrand(u: np.ndarray) -> np.ndarray:
        nu = (x_cut + sign * u**2) * GHZ
        w = weight(amp, nu) * GHZ
        return np.stack([2.0 * w * strength(nu) / (NS * math.sqrt(GHZ)), 2.0 * u * w])

    totals, report = integrate_adaptive(
        integrand,
        0.0,
        math.sqrt(abs(x_far - x_cut)),
        quad,
        breakpoints=np.sqrt(np.abs(inside - x_cut)),
    )
    return np.asarray(totals), report.subdivisions


def _weighted_mean(
    src: SourceSpec,
    g: GuideGeometry,
    quad: Optional[QuadratureSpec],
    weight: Callable[[OpticalAmplitude, np.ndarray], np.ndarray],
    tau: Callable[[np.ndarray], np.ndarray],
    strength: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> float:
    """``int w tau dnu / int w dnu`` over the source window.

    With ``strength`` set, ``tau`` has an inverse square-root singularity at the
    inner cutoff and the window is split there.
    """
    quad = quad or default_quadrature()
    cut = cutoff_frequencies(g)
    amp = OpticalAmplitude(source=src, cutoffs=cut)
    window = spectral_window(amp, g, quad, lambda nu: weight(amp, nu))
    lower, upper = window.lower / GHZ, window.upper / GHZ
    edges = np.asarray(window.breakpoints) / GHZ
    x_cut = cut.nu_in / GHZ

    if strength is not None and lower < x_cut < upper:
        below, n_below = _cutoff_side(amp, weight, strength, x_cut, lower, edges, quad)
        above, n_above = _cutoff_side(amp, weight, strength, x_cut, upper, edges, quad)
        totals, subdivisions = below + above, n_below + n_above
    else:

        def integrand(x: np.ndarray) -> np.ndarray:
            nu = x * GHZ
            w = weight(amp, nu) * GHZ
            return np.stack([w * tau(nu) / NS, w])

        result, report = integrate_adaptive(integrand, lower, upper, quad, breakpoints=edges)
        totals, subdivisions = np.asarray(result), report.subdivisions
    moment, norm = (float(np.real(v)) for v in totals)
    if norm < DEGENERATE_NORM:
        raise DegenerateInputError(f"line weight vanishes (norm={norm:.3e})")
    logger.debug(
        "weighted baseline | nu_ghz=%.4f upper_ghz=%.1f split=%s subdivisions=%d",
        src.nu_mu / GHZ,
        upper,
        strength is not None and lower < x_cut < upper,
        subdivisions,
    )
    return moment / norm * NS


def _line_weight(amp: OpticalAmplitude, nu: np.ndarray) -> np.ndarray:
    return np.abs(amp.value(nu)) ** 2


def _transmitted_weight(g: GuideGeometry) -> Callable[[OpticalAmplitude, np.ndarray], np.ndarray]:
    def weight(amp: OpticalAmplitude, nu: np.ndarray) -> np.ndarray:
        return np.abs(guide_transmission(nu, g, amp.cutoffs) * amp.value(nu)) ** 2

    return weight


def weighted_phase_time(src: SourceSpec, g: GuideGeometry, quad: Optional[QuadratureSpec] = None) -> float:
    """``int |T A|^2 tau_PT dnu / int |T A|^2 dnu``, in seconds."""
    return _weighted_mean(src, g, quad, _transmitted_weight(g), _pointwise("pt", g))


def averaged_baseline(
    model: BaselineModelTag, src: SourceSpec, g: GuideGeometry, quad: Optional[QuadratureSpec] = None
) -> float:
    """Baseline delay averaged over the source line with weight ``|A|^2``."""
    strength = (lambda nu: np.asarray(buttiker_landauer_strength(nu, g))) if model == "bl" else None
    return _weighted_mean(src, g, quad, _line_weight, _pointwise(model, g), strength)


def baseline_evaluator(
    model: BaselineModelTag,
    g: GuideGeometry,
    lambda_hwhm: float,
    quad: Optional[QuadratureSpec] = None,
    averaging: bool = False,
) -> Callable[[float], float]:
    """Baseline delay in seconds as a function of the line centre, for ``sweep_curve``."""
    if model not in ("pt", "bl"):
        raise ValueError(f"unknown baseline model {model!r}")
    if averaging:

        def evaluate(nu: float) -> float:
            return averaged_baseline(model, SourceSpec(nu_mu=nu, lambda_hwhm=lambda_hwhm), g, quad)

    elif model == "pt":

        def evaluate(nu: float) -> float:
            return float(phase_time(nu, g))

    else:

        def evaluate(nu: float) -> float:
            return float(buttiker_landauer_time(nu, g))

    return evaluate


def baseline_curve(
    model: BaselineModelTag,
    sweep: SweepSpec,
    g: GuideGeometry,
    lambda_hwhm: float,
    quad: Optional[QuadratureSpec] = None,
    *,
    averaging: bool = False,
    workers: int = 1,
) -> DelayCurve:
    """Baseline delay over the sweep, pointwise at ``nu_mu`` or line-averaged."""
    evaluate = baseline_evaluator(model, g, lambda_hwhm, quad, averaging)
    return sweep_curve(model, sweep.frequencies(), evaluate, workers)
