from __future__ import annotations

import logging
from typing import Tuple

import numpy as np

from sts_numerics import DomainError, UnsupportedError, differentiate_central, sqrt_diff_of_squares, upper_sqrt

from .types import BarrierSpec, Wavenumbers

logger = logging.getLogger(__name__)

# below this |k1| L the printed closed form loses every digit to cancellation
SERIES_GUARD = 1e-6
# below this |k1| L the analytic partials are replaced by a finite difference
PARTIALS_GUARD = 1e-3


def _as_real(name: str, value: float | np.ndarray) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def wavenumbers(energy: float, barrier: BarrierSpec) -> Wavenumbers:
    """Outside and inside wavenumbers at energy ``energy``.

    ``k1`` is taken on the ``Im k1 >= 0`` branch, so below the barrier top it is
    ``i kappa`` with ``kappa > 0``.
    """
    if not np.isfinite(energy) or energy <= 0:
        raise DomainError(f"energy must be positive and finite, got {energy!r}")
    scale = 2.0 * barrier.mass / barrier.hbar**2
    k = float(np.sqrt(scale * energy))
    k1 = complex(upper_sqrt(scale * (energy - barrier.height)))
    return Wavenumbers(k=k, k1=k1)


def inside_wavenumber(k: float | np.ndarray, barrier: BarrierSpec) -> np.ndarray | complex:
    """``k1(k) = sqrt(k**2 - k0**2)`` with ``k0`` the barrier threshold wavenumber."""
    k0 = barrier.threshold_wavenumber
    k = np.asarray(k, dtype=float)
    return sqrt_diff_of_squares(k, k0)


def transmission_coefficient(
    k: float | np.ndarray, k1: complex | np.ndarray, length: float
) -> np.ndarray | complex:
    """Amplitude transmission ``T`` of the barrier, vectorized over ``k``/``k1``.

    Uses ``4 k k1 e^{-iL(k-k1)} / [(k+k1)^2 - e^{2iLk1}(k-k1)^2]``. When
    ``|k1| L`` drops below ``SERIES_GUARD`` the common factor ``k1`` is divided
    out of numerator and denominator, leaving ``(e^z - 1)/z`` with ``z = 2iLk1``,
    which is replaced by its series. ``T`` is even in ``k1``.
    """
    k = _as_real("k", k)
    k1 = np.asarray(k1, dtype=complex)
    if not np.all(np.isfinite(k1)):
        raise DomainError("k1 must be finite")
    if np.any(k <= 0):
        raise DomainError("k must be positive")
    if not (np.isfinite(length) and length > 0):
        raise DomainError(f"length must be positive and finite, got {length!r}")

    k, k1 = np.broadcast_arrays(k, k1)
    phase = np.exp(-1j * length * (k - k1))
    z = 2j * length * k1
    fz = np.exp(z)
    small = np.abs(k1) * length < SERIES_GUARD
    with np.errstate(divide="ignore", invalid="ignore"):
        t = 4.0 * k * k1 * phase / ((k + k1) ** 2 - fz * (k - k1) ** 2)
    if np.any(small):
        s1 = 1.0 + z / 2.0 + z**2 / 6.0
        t_small = 2.0 * k * phase / (k * (1.0 + fz) - 1j * length * (k**2 + k1**2) * s1)
        t = np.where(small, t_small, t)
    if t.ndim == 0:
        return complex(t)
    return t


def transmission_partials(
    k: float | np.ndarray, k1: complex | np.ndarray, length: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(T, dT/dk, dT/dk1)`` with ``k`` and ``k1`` held independent.

    Only valid away from ``k1 = 0``; callers fall back to a finite difference
    below ``PARTIALS_GUARD``.
    """
    k = np.asarray(k, dtype=float)
    k1 = np.asarray(k1, dtype=complex)
    e = np.exp(-1j * length * (k - k1))
    f = np.exp(2j * length * k1)
    num = 4.0 * k * k1 * e
    den = (k + k1) ** 2 - f * (k - k1) ** 2
    num_k = 4.0 * k1 * e * (1.0 - 1j * length * k)
    num_k1 = 4.0 * k * e * (1.0 + 1j * length * k1)
    den_k = 2.0 * (k + k1) - 2.0 * f * (k - k1)
    den_k1 = 2.0 * (k + k1) - 2j * length * f * (k - k1) ** 2 + 2.0 * f * (k - k1)
    t = num / den
    t_k = (num_k * den - num * den_k) / den**2
    t_k1 = (num_k1 * den - num * den_k1) / den**2
    return t, t_k, t_k1


def barrier_transmission(k: float | np.ndarray, barrier: BarrierSpec) -> np.ndarray | complex:
    """``T`` as a function of the outside wavenumber alone."""
    return transmission_coefficient(k, inside_wavenumber(k, barrier), barrier.length)


def barrier_transmission_derivative(k: float | np.ndarray, barrier: BarrierSpec) -> np.ndarray | complex:
    """``dT/dk`` along ``k1 = sqrt(k**2 - k0**2)``, i.e. ``T_k + T_k1 * k / k1``."""
    k = _as_real("k", k)
    k1 = np.asarray(inside_wavenumber(k, barrier), dtype=complex)
    near = np.abs(k1) * barrier.length < PARTIALS_GUARD
    with np.errstate(divide="ignore", invalid="ignore"):
        _, t_k, t_k1 = transmission_partials(k, k1, barrier.length)
        out = t_k + t_k1 * k / k1
    if np.any(near):
        kn = np.atleast_1d(k)[np.atleast_1d(near)]
        fd = differentiate_central(lambda q: barrier_transmission(q, barrier), kn, scale=float(np.min(kn)))
        out = np.atleast_1d(out).astype(complex)
        out[np.atleast_1d(near)] = fd
        if np.ndim(k) == 0:
            out = out[0]
    if np.ndim(out) == 0:
        return complex(out)
    return out


def transmission_probability(energy: float, barrier: BarrierSpec) -> float:
    wn = wavenumbers(energy, barrier)
    return float(abs(transmission_coefficient(wn.k, wn.k1, barrier.length)) ** 2)


def _matching_matrix(q: complex, x: float) -> np.ndarray:
    return np.array(
        [
            [np.exp(1j * q * x), np.exp(-1j * q * x)],
            [1j * q * np.exp(1j * q * x), -1j * q * np.exp(-1j * q * x)],
        ],
        dtype=complex,
    )


def transfer_matrix_transmission(energy: float, barrier: BarrierSpec) -> complex:
    """Transmission amplitude from matching plane waves at ``x = 0`` and ``x = L``.

    Independent of the closed form and used to check it. Exactly at the
    barrier top the inside solution is linear rather than a plane-wave pair.
    """
    wn = wavenumbers(energy, barrier)
    if wn.k1 == 0:
        raise UnsupportedError("transfer matrix is singular at E == V0; use transmission_coefficient")
    left = _matching_matrix(wn.k, 0.0)
    inside_0 = _matching_matrix(wn.k1, 0.0)
    inside_l = _matching_matrix(wn.k1, barrier.length)
    right = _matching_matrix(wn.k, barrier.length)
    # (a0, b0) = P (a2, 0)
    p = np.linalg.solve(left, inside_0) @ np.linalg.solve(inside_l, right)
    return complex(1.0 / p[0, 0])
