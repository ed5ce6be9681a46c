from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from sts_numerics import (
    DegenerateInputError,
    NumericError,
    NumericsReport,
    QuadratureSpec,
    StsError,
    TailEnvelope,
    default_quadrature,
    integrate_adaptive,
    truncate_semi_infinite,
)

from .guide import cutoff_frequencies, guide_transmission_derivative, wavenumber_arrays
from .source import OpticalAmplitude
from .types import CurvePoint, Cutoffs, DelayCurve, GuideGeometry, SourceSpec, SweepSpec

logger = logging.getLogger(__name__)

# integrals run over nu in GHz with times in ns
GHZ = 1e9
NS = 1e-9
REALITY_TOL = 1e-8
DEGENERATE_NORM = 1e-300
# resolve the line core on these multiples of the line scale
CORE_OFFSETS = (-100, -30, -10, -3, -1, 0, 1, 3, 10, 30, 100)


class OpticalExpectation(BaseModel):
    value: float
    norm: float
    imaginary_residue: float = 0.0
    upper_limit: float
    report: NumericsReport = Field(default_factory=NumericsReport)

    def __float__(self) -> float:
        return self.value


class SpectralWindow(BaseModel):
    """Integration range in Hz and the panel edges that resolve it."""

    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    breakpoints: Tuple[float, ...]


def transmitted_field(
    nu: np.ndarray, amp: OpticalAmplitude, g: GuideGeometry, with_barrier: bool = True
) -> Tuple[np.ndarray, np.ndarray]:
    """``Phi = T A e^{ikL}`` and ``dPhi/dnu``; with ``with_barrier=False`` just ``A``."""
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    a = amp.value(nu)
    da = amp.derivative(nu)
    if not with_barrier:
        return a, da
    cut = amp.cutoffs
    k, _, dk, _ = wavenumber_arrays(nu, cut)
    t, dt = guide_transmission_derivative(nu, g, cut)
    prop = np.exp(1j * k * g.length)
    phi = t * a * prop
    dphi = (dt * a + t * da + 1j * g.length * dk * t * a) * prop
    return phi, dphi


def _panel_edges(src: SourceSpec, g: GuideGeometry, cut: Cutoffs, upper: float) -> Tuple[float, ...]:
    # pi/4 of free-space propagation phase per panel, up to a few times the inner cutoff
    cap = g.c / (8.0 * g.length)
    grid_stop = min(4.0 * cut.nu_in, upper)
    edges = set(np.arange(cut.nu_out + cap, grid_stop, cap).tolist())
    edges.update(src.nu_mu + j * src.lambda_hwhm for j in CORE_OFFSETS)
    if cut.has_barrier:
        edges.add(cut.nu_in)
    return tuple(sorted(e for e in edges if cut.nu_out < e < upper))


def spectral_window(
    amp: OpticalAmplitude,
    g: GuideGeometry,
    quad: QuadratureSpec,
    weight: Callable[[np.ndarray], np.ndarray],
) -> SpectralWindow:
    """Truncate ``(nu_out, inf)`` where the Lorentzian tail of ``weight`` becomes negligible.

    ``weight`` is a density in 1/Hz whose far tail is bounded by the unit
    Lorentzian of the source; the denominator estimate comes from integrating
    it up to ``nu_mu + M * Lambda``.
    """
    src, cut = amp.source, amp.cutoffs
    first = src.nu_mu + quad.truncation_multiplier * src.lambda_hwhm
    edges = _panel_edges(src, g, cut, first)
    estimate, _ = integrate_adaptive(
        lambda x: weight(x * GHZ) * GHZ, cut.nu_out / GHZ, first / GHZ, quad, breakpoints=np.asarray(edges) / GHZ
    )
    estimate = float(np.real(estimate))
    if not estimate > DEGENERATE_NORM:
        raise DegenerateInputError(f"transmitted weight vanishes (estimate={estimate:.3e})")
    upper = truncate_semi_infinite(TailEnvelope(center=src.nu_mu, width=src.lambda_hwhm), quad, estimate)
    return SpectralWindow(lower=cut.nu_out, upper=upper, breakpoints=_panel_edges(src, g, cut, upper))


def _expectation(
    src: SourceSpec, g: GuideGeometry, quad: Optional[QuadratureSpec], with_barrier: bool
) -> OpticalExpectation:
    quad = quad or default_quadrature()
    cut = cutoff_frequencies(g)
    amp = OpticalAmplitude(source=src, cutoffs=cut)

    def weight(nu: np.ndarray) -> np.ndarray:
        phi, _ = transmitted_field(nu, amp, g, with_barrier)
        return np.abs(phi) ** 2

    window = spectral_window(amp, g, quad, weight)

    def integrand(x: np.ndarray) -> np.ndarray:
        phi, dphi = transmitted_field(x * GHZ, amp, g, with_barrier)
        prod = np.conj(phi) * dphi * (GHZ / NS)
        return np.stack([prod.imag, prod.real, np.abs(prod), np.abs(phi) ** 2 * GHZ])

    totals, report = integrate_adaptive(
        integrand,
        window.lower / GHZ,
        window.upper / GHZ,
        quad,
        breakpoints=np.asarray(window.breakpoints) / GHZ,
        tol_reference=2,
    )
    moment, real_part, scale, norm = (float(np.real(v)) for v in totals)
    if norm < DEGENERATE_NORM:
        raise DegenerateInputError(f"transmitted weight vanishes (norm={norm:.3e})")

    # |Phi|^2 vanishes at the outer cutoff whenever a barrier is present
    upper_edge = float(weight(np.array([window.upper]))[0])
    lower_edge = 0.0 if (with_barrier and cut.has_barrier) else float(np.abs(amp.value(np.array([cut.nu_out])))[0] ** 2)
    residue = real_part - 0.5 * (upper_edge - lower_edge) / NS
    relative = abs(residue) / max(scale, DEGENERATE_NORM)
    if relative > REALITY_TOL:
        raise NumericError(
            f"imaginary residue {relative:.3e} exceeds {REALITY_TOL:.0e} at nu_mu={src.nu_mu:.6e}", report
        )
    value = moment / (2.0 * math.pi * norm) * NS
    report = report.model_copy(update={"truncation_point": window.upper})
    logger.debug(
        "optical expectation | nu_ghz=%.4f barrier=%s value_ns=%.6f upper_ghz=%.1f subdivisions=%d",
        src.nu_mu / GHZ,
        with_barrier,
        value / NS,
        window.upper / GHZ,
        report.subdivisions,
    )
    return OpticalExpectation(
        value=value, norm=norm / GHZ, imaginary_residue=relative, upper_limit=window.upper, report=report
    )


def optical_expected_time(
    src: SourceSpec, g: GuideGeometry, quad: Optional[QuadratureSpec] = None
) -> OpticalExpectation:
    """Expected detection time behind the narrowing, in seconds."""
    return _expectation(src, g, quad, with_barrier=True)


def optical_entrance_time(
    src: SourceSpec, g: GuideGeometry, quad: Optional[QuadratureSpec] = None
) -> OpticalExpectation:
    """Same expectation at the entrance of the narrowing (no barrier, zero length)."""
    return _expectation(src, g, quad, with_barrier=False)


def optical_delay(src: SourceSpec, g: GuideGeometry, quad: Optional[QuadratureSpec] = None) -> OpticalExpectation:
    """Delay attributed to the narrowing.

    In the ``envelope`` phase model the pre-barrier phase already accounts for
    the entrance time, so the delay is the expected time itself. In the
    ``causal`` model the line shape's own phase slope shifts both times, and the
    entrance time is subtracted.
    """
    after = optical_expected_time(src, g, quad)
    if src.phase_model == "envelope":
        return after
    before = optical_entrance_time(src, g, quad)
    return after.model_copy(
        update={
            "value": after.value - before.value,
            "imaginary_residue": max(after.imaginary_residue, before.imaginary_residue),
            "report": after.report.merged(before.report),
        }
    )


def _sweep_point(nu: float, evaluate: Callable[[float], float], model: str) -> CurvePoint:
    started = time.perf_counter()
    try:
        value = evaluate(nu)
    except (StsError, ValueError) as exc:
        logger.warning("sweep point failed | nu_ghz=%.4f model=%s error=%s", nu / GHZ, model, exc)
        return CurvePoint(nu=nu, status="failed", message=str(exc))
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    logger.debug("sweep point done | nu_ghz=%.4f model=%s elapsed_ms=%d", nu / GHZ, model, elapsed_ms)
    if math.isinf(value):
        return CurvePoint(nu=nu, status="infinite", message="diverges at the inner cutoff")
    return CurvePoint(nu=nu, delay=value)


def sweep_curve(
    model: str, nus: np.ndarray, evaluate: Callable[[float], float], workers: int = 1
) -> DelayCurve:
    """Evaluate ``evaluate`` at every frequency, failures recorded per point.

    Points are independent, so the values do not depend on ``workers``; the
    curve is always assembled in frequency order.
    """
    frequencies: List[float] = [float(nu) for nu in nus]
    if workers > 1 and len(frequencies) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(lambda nu: _sweep_point(nu, evaluate, model), frequencies))
    else:
        points = [_sweep_point(nu, evaluate, model) for nu in frequencies]
    failed = sum(p.status == "failed" for p in points)
    if failed:
        logger.warning("sweep finished with failures | model=%s failed=%d total=%d", model, failed, len(points))
    return DelayCurve(model=model, points=points)


def delay_evaluator(
    g: GuideGeometry,
    lambda_hwhm: float,
    ell: float = 0.0,
    quad: Optional[QuadratureSpec] = None,
    phase_model: Literal["envelope", "causal"] = "envelope",
) -> Callable[[float], float]:
    """Delay in seconds as a function of the line centre, for ``sweep_curve``."""

    def evaluate(nu: float) -> float:
        src = SourceSpec(nu_mu=nu, lambda_hwhm=lambda_hwhm, ell=ell, phase_model=phase_model)
        return optical_delay(src, g, quad).value

    return evaluate


def delay_curve(
    sweep: SweepSpec,
    g: GuideGeometry,
    lambda_hwhm: float,
    ell: float = 0.0,
    quad: Optional[QuadratureSpec] = None,
    *,
    phase_model: Literal["envelope", "causal"] = "envelope",
    workers: int = 1,
) -> DelayCurve:
    evaluate = delay_evaluator(g, lambda_hwhm, ell, quad, phase_model)
    return sweep_curve("sts", sweep.frequencies(), evaluate, workers)
