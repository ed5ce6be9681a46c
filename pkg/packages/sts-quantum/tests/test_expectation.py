from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from sts_numerics import CoverageError, DegenerateInputError
from sts_quantum import (
    BarrierSpec,
    GaussianSpectrum,
    LorentzianSpectrum,
    SampledSpectrum,
    TimeGrid,
    delay_time,
    expected_time_after_barrier,
    expected_time_closed,
    expected_time_direct,
    oracle_time_grid,
    post_barrier_spectrum,
    rho_on_grid,
    rho_t_given_x,
    spectrum_norm,
)

REFERENCE = GaussianSpectrum(center=5.0, width=0.2)


def test_real_spectrum_at_origin_has_zero_mean_time() -> None:
    result = expected_time_closed(REFERENCE, 0.0)
    assert result.value == pytest.approx(0.0, abs=1e-12)
    assert result.imaginary_residue <= 1e-8


def test_group_velocity_transit() -> None:
    near = expected_time_closed(REFERENCE, 0.0).value
    far = expected_time_closed(REFERENCE, 10.0).value
    assert far - near == pytest.approx(10.0 / 5.0, rel=0.02)


@pytest.mark.parametrize("t0", [-1.5, 0.25, 4.0])
def test_emission_time_shifts_mean(t0: float) -> None:
    base = expected_time_closed(GaussianSpectrum(center=4.0, width=0.3, chirp=0.2), 3.0).value
    moved = GaussianSpectrum(center=4.0, width=0.3, chirp=0.2, emission_time=t0)
    shifted = expected_time_closed(moved, 3.0).value
    assert shifted - base == pytest.approx(t0, abs=1e-7)


def test_left_mover_arrives_from_launch_point() -> None:
    spec = GaussianSpectrum(center=5.0, width=0.1, direction=-1, launch_position=20.0)
    assert expected_time_closed(spec, 10.0).value == pytest.approx(10.0 / 5.0, rel=0.01)


def test_sampled_spectrum_agrees_with_closed_family() -> None:
    source = GaussianSpectrum(center=5.0, width=0.3, launch_position=-1.0)
    grid = np.linspace(3.0, 7.0, 4001)
    sampled = SampledSpectrum(k_grid=grid.tolist(), plus_values=source.plus(grid).tolist())
    assert expected_time_closed(sampled, 2.0).value == pytest.approx(
        expected_time_closed(source, 2.0).value, rel=1e-3
    )


def test_rho_is_non_negative() -> None:
    spec = LorentzianSpectrum(center=3.0, width=0.3, chirp=0.5)
    for t in (-2.0, 0.0, 0.7, 3.0):
        assert rho_t_given_x(spec, 1.0, t) >= 0.0


def test_narrow_spectrum_has_flat_density() -> None:
    spec = GaussianSpectrum(center=5.0, width=1e-3)
    values = [rho_t_given_x(spec, 0.0, t) for t in (-1.0, 0.0, 1.0)]
    assert max(values) == pytest.approx(min(values), rel=1e-3)


def test_grid_density_matches_pointwise_quadrature() -> None:
    grid = oracle_time_grid(REFERENCE, 10.0)
    times, rho, _ = rho_on_grid(REFERENCE, 10.0, grid)
    peak = int(np.argmax(rho))
    for index in (peak - 15, peak, peak + 15):
        expected = rho_t_given_x(REFERENCE, 10.0, float(times[index]))
        assert rho[index] == pytest.approx(expected, rel=1e-5)


@pytest.mark.parametrize("x", [0.0, 5.0, 10.0])
def test_density_normalisation(x: float) -> None:
    norm, _ = spectrum_norm(REFERENCE)
    times, rho, captured = rho_on_grid(REFERENCE, x, oracle_time_grid(REFERENCE, x))
    assert captured > 1 - 1e-7
    assert trapezoid(rho, times) == pytest.approx(norm, rel=1e-4)


@pytest.mark.oracle
def test_direct_oracle_reference_case() -> None:
    closed = expected_time_closed(REFERENCE, 10.0).value
    direct = expected_time_direct(REFERENCE, 10.0).value
    assert direct == pytest.approx(closed, rel=1e-4)


@pytest.mark.oracle
def test_direct_oracle_real_spectrum_at_origin() -> None:
    assert expected_time_direct(REFERENCE, 0.0).value == pytest.approx(0.0, abs=1e-8)


@pytest.mark.oracle
def test_closed_form_matches_direct_oracle_on_random_spectra() -> None:
    rng = np.random.default_rng(1234)
    for i in range(20):
        common = dict(
            launch_position=float(rng.uniform(-2.0, 2.0)),
            emission_time=float(rng.uniform(-1.0, 1.0)),
            chirp=float(rng.uniform(-0.5, 0.5)),
        )
        if i % 2:
            center, width = float(rng.uniform(6.0, 8.0)), float(rng.uniform(0.1, 0.15))
            spec = LorentzianSpectrum(center=center, width=width, **common)
        else:
            center, width = float(rng.uniform(3.0, 6.0)), float(rng.uniform(0.15, 0.4))
            spec = GaussianSpectrum(center=center, width=width, **common)
        for x in (0.0, 5.0, 10.0):
            closed = expected_time_closed(spec, x).value
            direct = expected_time_direct(spec, x).value
            assert direct == pytest.approx(closed, rel=1e-4, abs=1e-5), (i, spec, x)


def test_explicit_narrow_window_reports_coverage() -> None:
    with pytest.raises(CoverageError) as info:
        expected_time_direct(REFERENCE, 10.0, TimeGrid(start=1.9, stop=2.1, step=0.01))
    assert 0.0 < info.value.captured_mass < 1.0


def test_post_barrier_spectrum_without_barrier_is_identity() -> None:
    incident = GaussianSpectrum(center=2.0, width=0.1)
    transmitted = post_barrier_spectrum(incident, BarrierSpec(height=0.0, length=2.0))
    k = np.linspace(1.7, 2.3, 13)
    assert np.allclose(transmitted.plus(k), incident.plus(k), rtol=0, atol=1e-15)


def test_tunnelling_suppresses_norm() -> None:
    incident = GaussianSpectrum(center=0.8, width=0.05)
    barrier = BarrierSpec(height=1.0, length=5.0)
    assert spectrum_norm(post_barrier_spectrum(incident, barrier))[0] < 1e-3 * spectrum_norm(incident)[0]


def test_transmitted_norm_matches_pointwise_weighting() -> None:
    barrier = BarrierSpec(height=1.0, length=3.0)
    incident = GaussianSpectrum(center=1.2 * math.sqrt(2.0), width=0.03)
    transmitted = post_barrier_spectrum(incident, barrier)
    lo, hi = incident.support()
    k = np.linspace(lo, hi, 20001)
    expected = trapezoid(np.abs(transmitted.plus(k)) ** 2, k)
    assert spectrum_norm(transmitted)[0] == pytest.approx(expected, rel=1e-6)


def test_after_barrier_is_closed_form_of_transmitted_spectrum() -> None:
    barrier = BarrierSpec(height=1.0, length=3.0)
    incident = GaussianSpectrum(center=1.3 * math.sqrt(2.0), width=0.05)
    after = expected_time_after_barrier(incident, barrier).value
    closed = expected_time_closed(post_barrier_spectrum(incident, barrier), barrier.length).value
    assert after == pytest.approx(closed, rel=1e-13)


def test_free_transit_without_barrier() -> None:
    incident = GaussianSpectrum(center=5.0, width=0.05)
    barrier = BarrierSpec(height=0.0, length=3.0)
    assert delay_time(incident, barrier).value == pytest.approx(3.0 / 5.0, rel=0.01)
    assert expected_time_after_barrier(incident, barrier).value == pytest.approx(3.0 / 5.0, rel=0.01)


@pytest.mark.oracle
def test_free_transit_matches_direct_oracle() -> None:
    incident = GaussianSpectrum(center=5.0, width=0.2)
    barrier = BarrierSpec(height=0.0, length=3.0)
    transmitted = post_barrier_spectrum(incident, barrier)
    direct = expected_time_direct(transmitted, barrier.length).value
    assert expected_time_after_barrier(incident, barrier).value == pytest.approx(direct, rel=1e-4)


def test_vanishing_length_gives_vanishing_delay() -> None:
    incident = GaussianSpectrum(center=1.2 * math.sqrt(2.0), width=0.05)
    delay = delay_time(incident, BarrierSpec(height=1.0, length=1e-6)).value
    assert abs(delay) < 1e-5


@pytest.mark.oracle
def test_near_threshold_transmission_matches_direct_oracle() -> None:
    barrier = BarrierSpec(height=1.0, length=3.0)
    incident = GaussianSpectrum(center=1.05 * math.sqrt(2.0), width=0.02)
    closed = expected_time_after_barrier(incident, barrier).value
    direct = expected_time_direct(post_barrier_spectrum(incident, barrier), barrier.length).value
    assert closed == pytest.approx(direct, rel=1e-3)


def test_opaque_barrier_delay_saturates() -> None:
    incident = GaussianSpectrum(center=0.5 * math.sqrt(2.0), width=0.005)
    lengths = [2.0, 3.0, 4.0, 6.0]
    delays = [delay_time(incident, BarrierSpec(height=1.0, length=length)).value for length in lengths]
    assert all(math.isfinite(d) for d in delays)
    increments = [abs(b - a) / (lb - la) for a, b, la, lb in zip(delays, delays[1:], lengths, lengths[1:])]
    assert increments[0] > increments[1] > increments[2]


def test_fully_reflected_packet_is_degenerate() -> None:
    incident = GaussianSpectrum(center=0.2, width=0.01)
    with pytest.raises(DegenerateInputError):
        delay_time(incident, BarrierSpec(height=1e6, length=50.0))


def test_spectrum_and_barrier_units_must_agree() -> None:
    with pytest.raises(ValueError):
        post_barrier_spectrum(GaussianSpectrum(center=1.0, width=0.1), BarrierSpec(height=1.0, length=1.0, mass=2.0))


@pytest.mark.parametrize("samples", [9_999, 10_002, 20_001])
def test_dense_sampled_spectrum_fits_quadrature_budget(samples: int) -> None:
    source = GaussianSpectrum(center=5.0, width=0.3)
    reference_grid = np.linspace(3.0, 7.0, 4001)
    reference = SampledSpectrum(k_grid=reference_grid.tolist(), plus_values=source.plus(reference_grid).tolist())
    grid = np.linspace(3.0, 7.0, samples)
    dense = SampledSpectrum(k_grid=grid.tolist(), plus_values=source.plus(grid).tolist())
    assert spectrum_norm(dense)[0] == pytest.approx(spectrum_norm(reference)[0], rel=1e-6)
    value = expected_time_closed(dense, 2.0).value
    assert value == pytest.approx(expected_time_closed(reference, 2.0).value, rel=1e-5)
    assert value == pytest.approx(2.0 / 5.0, rel=1e-2)
