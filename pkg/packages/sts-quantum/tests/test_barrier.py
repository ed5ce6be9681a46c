from __future__ import annotations

import math

import numpy as np
import pytest

from sts_numerics import DomainError, UnsupportedError, differentiate_central
from sts_quantum import (
    BarrierSpec,
    barrier_transmission,
    barrier_transmission_derivative,
    transfer_matrix_transmission,
    transmission_coefficient,
    transmission_partials,
    transmission_probability,
    wavenumbers,
)


def test_wavenumbers_below_barrier_are_evanescent() -> None:
    wn = wavenumbers(0.5, BarrierSpec(height=1.0, length=3.0))
    assert wn.k == pytest.approx(1.0)
    assert wn.k1 == pytest.approx(1j)


def test_wavenumbers_threshold_and_free_particle() -> None:
    assert wavenumbers(1.0, BarrierSpec(height=1.0, length=1.0)).k1 == 0
    wn = wavenumbers(2.0, BarrierSpec(height=0.0, length=1.0))
    assert wn.k1 == pytest.approx(wn.k)


@pytest.mark.parametrize("energy", [0.0, -1.0, math.nan])
def test_wavenumbers_reject_non_positive_energy(energy: float) -> None:
    with pytest.raises(DomainError):
        wavenumbers(energy, BarrierSpec(height=1.0, length=1.0))


def test_barrier_spec_validation() -> None:
    with pytest.raises(ValueError):
        BarrierSpec(height=1.0, length=0.0)
    with pytest.raises(ValueError):
        BarrierSpec(height=-0.1, length=1.0)


def test_no_barrier_is_fully_transmitting() -> None:
    k = np.linspace(0.1, 10.0, 25)
    assert np.allclose(transmission_coefficient(k, k.astype(complex), 3.0), 1.0, rtol=0, atol=1e-15)


def test_transmission_resonance() -> None:
    barrier = BarrierSpec(height=1.0, length=3.0)
    k1 = math.pi / barrier.length
    energy = barrier.height + k1**2 / 2.0
    assert transmission_probability(energy, barrier) == pytest.approx(1.0, abs=1e-14)


def test_closed_form_matches_transfer_matrix_at_reference_point() -> None:
    barrier = BarrierSpec(height=1.0, length=3.0)
    wn = wavenumbers(0.5, barrier)
    closed = transmission_coefficient(wn.k, wn.k1, barrier.length)
    oracle = transfer_matrix_transmission(0.5, barrier)
    assert abs(closed - oracle) <= 1e-10 * abs(oracle)


def test_closed_form_matches_transfer_matrix_on_random_triples() -> None:
    rng = np.random.default_rng(20240611)
    checked = 0
    while checked < 100:
        energy, height, length = rng.uniform(0.05, 5.0), rng.uniform(0.0, 3.0), rng.uniform(0.1, 5.0)
        if abs(energy - height) <= 1e-3:
            continue
        barrier = BarrierSpec(height=height, length=length)
        wn = wavenumbers(energy, barrier)
        closed = transmission_coefficient(wn.k, wn.k1, length)
        oracle = transfer_matrix_transmission(energy, barrier)
        assert abs(closed - oracle) <= 1e-10 * abs(oracle), (energy, height, length)
        checked += 1


def test_modulus_bounded_on_lattice() -> None:
    barrier_height = 1.0
    for length in np.linspace(0.2, 6.0, 10):
        barrier = BarrierSpec(height=barrier_height, length=float(length))
        for energy in np.linspace(0.05, 4.0, 20):
            p = transmission_probability(float(energy), barrier)
            assert p <= 1.0 + 1e-14
            wn = wavenumbers(float(energy), barrier)
            resonant = energy > barrier_height and abs(math.sin(wn.k1.real * length)) < 1e-12
            if not resonant:
                assert p < 1.0


def test_transfer_matrix_rejects_threshold() -> None:
    with pytest.raises(UnsupportedError):
        transfer_matrix_transmission(1.0, BarrierSpec(height=1.0, length=2.0))


def test_threshold_limit() -> None:
    k, length = 1.3, 2.0
    expected = np.exp(-1j * length * k) / (1.0 - 1j * length * k / 2.0)
    assert transmission_coefficient(k, 0.0, length) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("k1", [1e-7, 1e-7j, 3e-7 + 0j])
def test_series_guard_is_continuous(k1: complex) -> None:
    k, length = 1.3, 2.0
    inside = transmission_coefficient(k, k1, length)
    outside = transmission_coefficient(k, 2e-5, length)
    assert abs(inside - outside) < 1e-4


def test_transmission_is_even_in_k1() -> None:
    k = np.array([0.5, 1.0, 2.0])
    k1 = np.array([0.3 + 0j, 0.7j, 1.5 + 0j])
    assert np.allclose(transmission_coefficient(k, k1, 2.5), transmission_coefficient(k, -k1, 2.5), rtol=1e-12)


def test_nonfinite_inputs_rejected() -> None:
    with pytest.raises(DomainError):
        transmission_coefficient(math.inf, 1.0, 1.0)
    with pytest.raises(DomainError):
        transmission_coefficient(1.0, complex(math.nan, 0.0), 1.0)


def test_partials_match_finite_differences() -> None:
    k, k1, length = 1.7, 0.9 + 0j, 2.2
    _, t_k, t_k1 = transmission_partials(k, k1, length)
    fd_k = differentiate_central(lambda q: transmission_coefficient(q, k1, length), k)
    fd_k1 = differentiate_central(lambda q: transmission_coefficient(k, q, length), k1.real)
    assert complex(t_k) == pytest.approx(fd_k, rel=1e-8)
    assert complex(t_k1) == pytest.approx(fd_k1, rel=1e-8)


def test_total_derivative_across_threshold() -> None:
    barrier = BarrierSpec(height=1.0, length=3.0)
    k0 = barrier.threshold_wavenumber
    ks = np.array([0.6 * k0, 0.99 * k0, k0 * (1 + 1e-9), 1.01 * k0, 1.5 * k0])
    analytic = barrier_transmission_derivative(ks, barrier)
    numeric = differentiate_central(lambda q: barrier_transmission(q, barrier), ks, h0=1e-4)
    assert np.allclose(analytic, numeric, rtol=1e-6, atol=1e-9)
