from __future__ import annotations

import logging
import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import fft as sp_fft
from scipy.integrate import simpson, trapezoid

from sts_numerics import CoverageError, DegenerateInputError, NumericError, integrate_adaptive
from sts_numerics.model import NumericsReport, QuadratureSpec

from .spectra import DEGENERATE_NORM, ORACLE_TAIL, MomentumSpectrum, TransmittedSpectrum
from .types import BarrierSpec

logger = logging.getLogger(__name__)

COVERAGE_TOL = 1e-7
# arrival estimates only use k where |C|^2 exceeds this fraction of its peak
ARRIVAL_WEIGHT_FLOOR = 1e-6
MAX_WINDOW_EXPANSIONS = 3


class TimeExpectation(BaseModel):
    """An expected time with the diagnostics of the integrals behind it."""

    value: float
    norm: float
    imaginary_residue: float = 0.0
    report: NumericsReport = Field(default_factory=NumericsReport)

    def __float__(self) -> float:
        return self.value


class TimeGrid(BaseModel):
    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    step: float = Field(gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "TimeGrid":
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or self.stop <= self.start:
            raise ValueError("time window must satisfy start < stop")
        return self

    def widened(self, factor: float) -> "TimeGrid":
        mid = 0.5 * (self.start + self.stop)
        half = 0.5 * factor * (self.stop - self.start)
        return TimeGrid(start=mid - half, stop=mid + half, step=self.step)


def _components(spectrum: MomentumSpectrum):
    yield spectrum.plus, spectrum.d_plus, 1
    if spectrum.has_minus:
        yield spectrum.minus, spectrum.d_minus, -1


def _reality_tolerance(spectrum: MomentumSpectrum) -> float:
    if isinstance(spectrum, TransmittedSpectrum):
        return _reality_tolerance(spectrum.incident)
    return spectrum.reality_tol


def _flux_moments(
    spectrum: MomentumSpectrum,
    x: float,
    spec: QuadratureSpec | None,
) -> TimeExpectation:
    """Evaluate ``(m/i hbar) int Gamma* dGamma/dk dk / int |C|^2 dk``.

    Four channels share one subdivision tree: the imaginary part (the time
    moment), the real part (must reduce to the boundary term), ``|Gamma* Gamma'|``
    as the scale of the residue, and the norm.
    """
    lo, hi = spectrum.support()
    components = list(_components(spectrum))

    def integrand(k: np.ndarray) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        out = np.zeros((4,) + k.shape)
        for c_fn, dc_fn, s in components:
            c = c_fn(k)
            dc = dc_fn(k)
            weight = np.abs(c) ** 2
            prod = (np.conj(c) * dc + 1j * s * x * weight - weight / (2.0 * k)) / k
            out[0] += prod.imag
            out[1] += prod.real
            out[2] += np.abs(prod)
            out[3] += weight
        return out

    totals, report = integrate_adaptive(
        integrand, lo, hi, spec, breakpoints=spectrum.breakpoints(), tol_reference=2
    )
    moment, real_part, scale, norm = (float(np.real(v)) for v in totals)
    if norm < DEGENERATE_NORM:
        raise DegenerateInputError(f"spectrum carries no weight (norm={norm:.3e})")

    def edge(k: float) -> float:
        kk = np.array([k])
        return float(sum(np.abs(c_fn(kk)[0]) ** 2 for c_fn, _, _ in components) / k) if k > 0 else 0.0

    residue = real_part - 0.5 * (edge(hi) - edge(lo))
    relative = abs(residue) / max(scale, DEGENERATE_NORM)
    tolerance = _reality_tolerance(spectrum)
    if relative > tolerance:
        raise NumericError(f"imaginary residue {relative:.3e} exceeds {tolerance:.0e} (x={x:g})", report)
    value = spectrum.mass / spectrum.hbar * moment / norm
    logger.debug(
        "flux moments | x=%g value=%.12g residue=%.2e subdivisions=%d", x, value, relative, report.subdivisions
    )
    return TimeExpectation(value=value, norm=norm, imaginary_residue=relative, report=report)


def expected_time_closed(
    spectrum: MomentumSpectrum, x: float, spec: QuadratureSpec | None = None
) -> TimeExpectation:
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    return _flux_moments(spectrum, x, spec)


def post_barrier_spectrum(incident: MomentumSpectrum, barrier: BarrierSpec) -> TransmittedSpectrum:
    incident.compatible_with(barrier)
    if incident.has_minus:
        raise ValueError("incident spectrum must be purely right-moving")
    return TransmittedSpectrum(incident=incident, barrier=barrier, hbar=incident.hbar, mass=incident.mass)


def expected_time_after_barrier(
    incident: MomentumSpectrum, barrier: BarrierSpec, spec: QuadratureSpec | None = None
) -> TimeExpectation:
    """Expected detection time just behind the barrier, at ``x = L``."""
    transmitted = post_barrier_spectrum(incident, barrier)
    return _flux_moments(transmitted, barrier.length, spec)


def delay_time(
    incident: MomentumSpectrum, barrier: BarrierSpec, spec: QuadratureSpec | None = None
) -> TimeExpectation:
    after = expected_time_after_barrier(incident, barrier, spec)
    before = expected_time_closed(incident, 0.0, spec)
    return TimeExpectation(
        value=after.value - before.value,
        norm=after.norm,
        imaginary_residue=max(after.imaginary_residue, before.imaginary_residue),
        report=after.report.merged(before.report),
    )


def rho_t_given_x(
    spectrum: MomentumSpectrum, x: float, t: float, spec: QuadratureSpec | None = None
) -> float:
    """Arrival-time density at a single instant, by adaptive quadrature over ``k``."""
    lo, hi = spectrum.support(ORACLE_TAIL)
    rate = abs(x) + spectrum.hbar * hi * abs(t) / spectrum.mass
    max_panel = math.pi / rate if rate > 0 else None
    components = list(_components(spectrum))

    def integrand(k: np.ndarray) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        omega = spectrum.energy(k)
        return np.stack(
            [np.sqrt(k) * c_fn(k) * np.exp(1j * (s * k * x - omega * t)) for c_fn, _, s in components]
        )

    amps, _ = integrate_adaptive(integrand, lo, hi, spec, breakpoints=spectrum.breakpoints(), max_panel=max_panel)
    amps = np.atleast_1d(amps)
    return float(spectrum.hbar / (2.0 * math.pi * spectrum.mass) * np.sum(np.abs(amps) ** 2))


def oracle_time_grid(spectrum: MomentumSpectrum, x: float, samples: int = 4097) -> TimeGrid:
    """Window around the stationary-phase arrival times of the significant modes.

    Each mode arrives at ``t(k) = (m / hbar k) d arg(C e^{+-ikx}) / dk``; the window
    spans those arrivals padded by ``10 / delta_omega`` and the step keeps the
    widest energy difference below ``pi / 8`` of phase per step.
    """
    lo, hi = spectrum.support(ORACLE_TAIL)
    k = np.linspace(max(lo, hi * 1e-9), hi, samples)
    omega = spectrum.energy(k)
    arrivals = []
    weights = np.zeros_like(k)
    for c_fn, dc_fn, s in _components(spectrum):
        c = c_fn(k)
        weights = weights + np.abs(c) ** 2
        strong = np.abs(c) ** 2 > ARRIVAL_WEIGHT_FLOOR * np.max(np.abs(c) ** 2)
        slope = np.imag(np.conj(c[strong]) * dc_fn(k[strong])) / np.abs(c[strong]) ** 2 + s * x
        arrivals.append(spectrum.mass / (spectrum.hbar * k[strong]) * slope)
    if not np.any(weights > 0):
        raise DegenerateInputError("spectrum carries no weight on its support")
    times = np.concatenate(arrivals)
    # one-sigma quantile half-width of the energy distribution
    cumulative = np.cumsum(weights) / np.sum(weights)
    spread = 0.5 * float(np.interp(0.8413, cumulative, omega) - np.interp(0.1587, cumulative, omega))
    if spread == 0.0:
        raise DegenerateInputError("monochromatic spectrum has no finite arrival window")
    pad = 10.0 / spread
    step = (math.pi / 8.0) / (spectrum.energy(hi) - spectrum.energy(lo))
    return TimeGrid(start=float(times.min()) - pad, stop=float(times.max()) + pad, step=step)


def rho_on_grid(
    spectrum: MomentumSpectrum, x: float, grid: TimeGrid
) -> Tuple[np.ndarray, np.ndarray, float]:
    """``rho(t|x)`` on the window of ``grid``, with the fraction of mass it captures.

    With ``omega = hbar k^2 / 2m`` the amplitude is a Fourier integral,
    ``(m/hbar) int C e^{+-ikx} k^{-1/2} e^{-i omega t} d omega``, summed here on a
    uniform ``omega`` grid whose period in ``t`` is twice the window.
    """
    lo, hi = spectrum.support(ORACLE_TAIL)
    span = grid.stop - grid.start
    period = 2.0 * span
    n = sp_fft.next_fast_len(int(math.ceil(period / grid.step)))
    dt = period / n
    d_omega = 2.0 * math.pi / period
    omega_lo, omega_hi = float(spectrum.energy(lo)), float(spectrum.energy(hi))
    n_omega = int((omega_hi - omega_lo) / d_omega) + 1
    if n_omega > n:
        raise NumericError(f"time step {grid.step:g} too coarse for an energy span of {omega_hi - omega_lo:g}")
    omega = omega_lo + d_omega * np.arange(n_omega)
    k = np.sqrt(2.0 * spectrum.mass * omega / spectrum.hbar)
    t_start = grid.start - 0.5 * span
    shift = np.exp(-1j * d_omega * t_start * np.arange(n_omega))

    safe_k = np.where(k > 0, k, 1.0)
    density = np.zeros(n)
    for c_fn, _, s in _components(spectrum):
        g = spectrum.mass / spectrum.hbar * c_fn(safe_k) * np.exp(1j * s * safe_k * x) / np.sqrt(safe_k)
        g = np.where(k > 0, g, 0.0)
        padded = np.zeros(n, dtype=complex)
        padded[:n_omega] = g * shift
        amp = d_omega * sp_fft.fft(padded)
        density += np.abs(amp) ** 2
    density *= spectrum.hbar / (2.0 * math.pi * spectrum.mass)

    times = t_start + dt * np.arange(n)
    inside = (times >= grid.start) & (times <= grid.stop)
    total = float(np.sum(density) * dt)
    if not total > 0:
        raise DegenerateInputError("time density vanishes on the whole period")
    captured = float(simpson(density[inside], x=times[inside])) / total
    return times[inside], density[inside], captured


def expected_time_direct(
    spectrum: MomentumSpectrum, x: float, grid: Optional[TimeGrid] = None
) -> TimeExpectation:
    """``int t rho dt / int rho dt`` on a time grid; the brute-force check of the closed form.

    Without an explicit grid the stationary-phase window is used and widened
    when it misses more than ``COVERAGE_TOL`` of the mass.
    """
    explicit = grid is not None
    window = grid if grid is not None else oracle_time_grid(spectrum, x)
    for attempt in range(MAX_WINDOW_EXPANSIONS + 1):
        times, rho, captured = rho_on_grid(spectrum, x, window)
        if captured >= 1.0 - COVERAGE_TOL:
            break
        if explicit or attempt == MAX_WINDOW_EXPANSIONS:
            raise CoverageError(
                f"time window [{window.start:g}, {window.stop:g}] captures {captured:.6f} of the mass",
                captured_mass=captured,
            )
        logger.debug("widening oracle window | x=%g captured=%.8f", x, captured)
        window = window.widened(2.0)

    mass = float(simpson(rho, x=times))
    moment = float(simpson(times * rho, x=times))
    coarse = float(trapezoid(times * rho, x=times)) / float(trapezoid(rho, x=times))
    value = moment / mass
    report = NumericsReport(error_estimate=abs(value - coarse), subdivisions=int(times.size))
    return TimeExpectation(value=value, norm=mass, report=report)

