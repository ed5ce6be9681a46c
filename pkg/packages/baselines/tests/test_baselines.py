from __future__ import annotations

import logging
import math

import numpy as np
import pytest
from scipy import integrate

from baselines import (
    averaged_baseline,
    baseline_curve,
    buttiker_landauer_time,
    phase_time,
    transmitted_phase,
    weighted_phase_time,
)
from sts_numerics import DomainError, default_quadrature
from waveguide_analog import (
    GuideGeometry,
    OpticalAmplitude,
    SourceSpec,
    SweepSpec,
    cutoff_frequencies,
    optical_expected_time,
    spectral_window,
    velocities,
)

logger = logging.getLogger(__name__)

FIG1A = GuideGeometry(b=0.02286, b_prime=0.0158, a=0.01016, a_prime=0.0079, length=0.15)
FIG1B = FIG1A.model_copy(update={"length": 0.20})
EMPTY = FIG1A.without_barrier()
NU_IN = cutoff_frequencies(FIG1A).nu_in


def test_buttiker_landauer_below_cutoff() -> None:
    assert buttiker_landauer_time(9.0e9, FIG1A) == pytest.approx(1.50e-9, rel=1e-2)


def test_buttiker_landauer_diverges_at_cutoff() -> None:
    assert math.isinf(buttiker_landauer_time(NU_IN, FIG1A))
    near = buttiker_landauer_time(np.array([NU_IN - 1e6, NU_IN + 1e6]), FIG1A)
    assert np.all(near > 100 * buttiker_landauer_time(9.0e9, FIG1A))


def test_buttiker_landauer_approaches_light_transit() -> None:
    tau = buttiker_landauer_time(np.array([50e9, 200e9, 1e12]), FIG1A)
    assert np.all(tau > FIG1A.length / FIG1A.c)
    assert np.all(np.diff(tau) < 0)
    assert tau[-1] == pytest.approx(FIG1A.length / FIG1A.c, rel=1e-3)


def test_buttiker_landauer_rejects_frequency_below_outer_cutoff() -> None:
    with pytest.raises(DomainError):
        buttiker_landauer_time(6e9, FIG1A)


def test_phase_time_of_empty_guide_is_group_transit() -> None:
    nus = np.linspace(7e9, 12e9, 26)
    _, v_group = velocities(nus, cutoff_frequencies(EMPTY))
    assert np.allclose(phase_time(nus, EMPTY), EMPTY.length / v_group, rtol=1e-10, atol=0)
    assert phase_time(10e9, EMPTY) == pytest.approx(0.663e-9, rel=1e-2)


def test_phase_time_is_finite_across_cutoff() -> None:
    nus = np.array([NU_IN - 1e8, NU_IN, NU_IN + 1e8])
    tau = phase_time(nus, FIG1A)
    assert np.all(np.isfinite(tau))
    assert np.all(tau > 0)


def test_phase_time_saturates_with_length() -> None:
    nu = NU_IN - 1e9
    short, long = phase_time(nu, FIG1A), phase_time(nu, FIG1B)
    assert math.isfinite(short) and math.isfinite(long)
    logger.info(
        "opaque phase time | short_ns=%.4f long_ns=%.4f ratio=%.4f", short * 1e9, long * 1e9, long / short
    )


def test_transmitted_phase_matches_phase_time() -> None:
    nus = np.linspace(8.6e9, 10.4e9, 7)
    phase = transmitted_phase(nus, FIG1A)
    fine = np.linspace(8.6e9, 10.4e9, 6001)
    tau = phase_time(fine, FIG1A, check=False)
    integrated = 2 * math.pi * np.concatenate([[0.0], np.cumsum(0.5 * np.diff(fine) * (tau[1:] + tau[:-1]))])
    expected = phase[0] + integrated[::1000]
    assert np.allclose(phase, expected, atol=1e-4)


def test_transmitted_phase_rejects_unsorted_grid() -> None:
    with pytest.raises(ValueError):
        transmitted_phase(np.array([9e9, 8e9]), FIG1A)


@pytest.mark.parametrize("geometry, lambda_hwhm", [(FIG1A, 3e7), (FIG1B, 5e7)])
@pytest.mark.parametrize("nu_mu", [8.8e9, 9.5e9, 10.2e9])
def test_expected_time_is_weighted_phase_time(geometry: GuideGeometry, lambda_hwhm: float, nu_mu: float) -> None:
    src = SourceSpec(nu_mu=nu_mu, lambda_hwhm=lambda_hwhm)
    assert optical_expected_time(src, geometry).value == pytest.approx(weighted_phase_time(src, geometry), rel=1e-6)


def test_narrow_line_converges_to_phase_time() -> None:
    nu_mu = 10.2e9
    target = phase_time(nu_mu, FIG1A)
    errors = [
        abs(optical_expected_time(SourceSpec(nu_mu=nu_mu, lambda_hwhm=lam), FIG1A).value - target)
        for lam in (1e7, 3e6, 1e6)
    ]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 0.02 * target


def test_averaged_phase_time_of_narrow_line() -> None:
    src = SourceSpec(nu_mu=10.2e9, lambda_hwhm=1e6)
    assert averaged_baseline("pt", src, FIG1A) == pytest.approx(phase_time(10.2e9, FIG1A), rel=2e-2)


def test_averaged_buttiker_landauer_is_finite_at_cutoff() -> None:
    value = averaged_baseline("bl", SourceSpec(nu_mu=NU_IN, lambda_hwhm=3e7), FIG1A)
    assert math.isfinite(value)
    assert value > buttiker_landauer_time(9.0e9, FIG1A)


@pytest.mark.parametrize("nu_mu", [9.45e9, NU_IN, 9.53e9])
def test_averaged_buttiker_landauer_matches_endpoint_weighted_quadrature(nu_mu: float) -> None:
    src = SourceSpec(nu_mu=nu_mu, lambda_hwhm=3e7)
    cut = cutoff_frequencies(FIG1A)
    amp = OpticalAmplitude(source=src, cutoffs=cut)
    window = spectral_window(amp, FIG1A, default_quadrature(), lambda nu: np.abs(amp.value(nu)) ** 2)
    lo, hi, c, peak = window.lower / 1e9, window.upper / 1e9, cut.nu_in / 1e9, nu_mu / 1e9
    delta = 0.02

    def weight(x: float) -> float:
        return float(np.abs(amp.value(np.array([x * 1e9])))[0] ** 2)

    def strength_ns(x: float) -> float:
        return 1e9 * FIG1A.length * x / (FIG1A.c * math.sqrt(x + c))

    def tau_ns(x: float) -> float:
        return strength_ns(x) / math.sqrt(abs(x - c))

    opts = dict(epsabs=0.0, epsrel=1e-11, limit=500)
    outer = [p for p in (peak,) if abs(p - c) > delta]
    moment = (
        integrate.quad(lambda x: weight(x) * tau_ns(x), lo, c - delta, points=[p for p in outer if p < c], **opts)[0]
        + integrate.quad(lambda x: weight(x) * strength_ns(x), c - delta, c, weight="alg", wvar=(0, -0.5), **opts)[0]
        + integrate.quad(lambda x: weight(x) * strength_ns(x), c, c + delta, weight="alg", wvar=(-0.5, 0), **opts)[0]
        + integrate.quad(lambda x: weight(x) * tau_ns(x), c + delta, hi, points=[p for p in outer if p > c], **opts)[0]
    )
    norm = integrate.quad(weight, lo, hi, points=sorted({peak, c}), **opts)[0]
    assert averaged_baseline("bl", src, FIG1A) / 1e-9 == pytest.approx(moment / norm, rel=1e-6)


def test_averaged_buttiker_landauer_curve_crosses_cutoff() -> None:
    curve = baseline_curve("bl", SweepSpec(start=9.2e9, stop=9.8e9, step=5e7), FIG1A, 3e7, averaging=True)
    assert all(p.status == "ok" for p in curve.points)
    delays = [p.delay for p in curve.points]
    assert all(d is not None and math.isfinite(d) and d > 0 for d in delays)
    peak = max(range(len(delays)), key=lambda i: delays[i])
    assert abs(curve.points[peak].nu - NU_IN) < 1e8


def test_buttiker_landauer_curve_flags_cutoff() -> None:
    sweep = SweepSpec(start=NU_IN, stop=NU_IN + 4e8, step=2e8)
    curve = baseline_curve("bl", sweep, FIG1A, 3e7)
    assert [p.status for p in curve.points] == ["infinite", "ok", "ok"]
    assert curve.points[0].delay is None


def test_phase_time_curve_is_finite_across_cutoff() -> None:
    curve = baseline_curve("pt", SweepSpec(start=8.6e9, stop=10.4e9, step=3e8), FIG1A, 3e7)
    assert all(p.status == "ok" for p in curve.points)


def test_unknown_baseline_is_rejected() -> None:
    with pytest.raises(ValueError):
        averaged_baseline("larmor", SourceSpec(nu_mu=10e9, lambda_hwhm=3e7), FIG1A)  # type: ignore[arg-type]
