"""TE01 dispersion of the narrowed guide and its barrier transmission.

With ``k = (2 pi / c) sqrt(nu^2 - nu_out^2)`` and
``k1 = (2 pi / c) sqrt(nu^2 - nu_in^2)`` the guide is the quantum barrier
problem with ``k0 = (2 pi / c) sqrt(nu_in^2 - nu_out^2)``.
"""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from sts_numerics import DomainError, differentiate_central, sqrt_diff_of_squares
from sts_quantum import Wavenumbers, transmission_coefficient, transmission_partials

from .types import Cutoffs, GuideGeometry

# below this |k1| L the analytic partials are replaced by a finite difference in nu
PARTIALS_GUARD = 1e-3


def cutoff_frequencies(g: GuideGeometry) -> Cutoffs:
    return Cutoffs(nu_in=g.c / (2.0 * g.b_prime), nu_out=g.c / (2.0 * g.b), c=g.c)


def _check_above_cutoff(nu: np.ndarray, cut: Cutoffs) -> None:
    if not np.all(np.isfinite(nu)):
        raise DomainError("frequency must be finite")
    if np.any(nu <= cut.nu_out):
        raise DomainError(f"frequency below the outer cutoff {cut.nu_out:.6e} Hz")


def wavenumber_arrays(nu: float | np.ndarray, cut: Cutoffs) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """``(k, k1, dk/dnu, dk1/dnu)`` for frequencies above the outer cutoff."""
    nu = np.asarray(nu, dtype=float)
    _check_above_cutoff(nu, cut)
    scale = 2.0 * math.pi / cut.c
    k = scale * np.sqrt((nu - cut.nu_out) * (nu + cut.nu_out))
    k1 = scale * np.asarray(sqrt_diff_of_squares(nu, cut.nu_in))
    dk = scale**2 * nu / k
    with np.errstate(divide="ignore", invalid="ignore"):
        dk1 = scale**2 * nu / k1
    return k, k1, dk, dk1


def guide_wavenumbers(nu: float, cut: Cutoffs) -> Wavenumbers:
    k, k1, _, _ = wavenumber_arrays(nu, cut)
    return Wavenumbers(k=float(k), k1=complex(k1))


def equivalent_potential(cut: Cutoffs) -> float:
    """Barrier threshold wavenumber ``k0`` of the equivalent quantum problem."""
    return 2.0 * math.pi / cut.c * math.sqrt((cut.nu_in - cut.nu_out) * (cut.nu_in + cut.nu_out))


def velocities(nu: float | np.ndarray, cut: Cutoffs) -> Tuple[np.ndarray | float, np.ndarray | float]:
    """``(v_phase, v_group)`` of the empty guide."""
    nu_arr = np.asarray(nu, dtype=float)
    _check_above_cutoff(nu_arr, cut)
    root = np.sqrt((nu_arr - cut.nu_out) * (nu_arr + cut.nu_out))
    v_phase = cut.c * nu_arr / root
    v_group = cut.c * root / nu_arr
    if v_phase.ndim == 0:
        return float(v_phase), float(v_group)
    return v_phase, v_group


def guide_transmission(nu: float | np.ndarray, g: GuideGeometry, cut: Cutoffs | None = None) -> np.ndarray:
    cut = cut or cutoff_frequencies(g)
    k, k1, _, _ = wavenumber_arrays(nu, cut)
    return np.asarray(transmission_coefficient(k, k1, g.length))


def guide_transmission_derivative(
    nu: float | np.ndarray, g: GuideGeometry, cut: Cutoffs | None = None
) -> Tuple[np.ndarray, np.ndarray]:
    """``(T, dT/dnu)`` along the guide dispersion, by the chain rule through ``k`` and ``k1``."""
    cut = cut or cutoff_frequencies(g)
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    k, k1, dk, dk1 = wavenumber_arrays(nu, cut)
    if not cut.has_barrier:
        return np.ones(nu.shape, dtype=complex), np.zeros(nu.shape, dtype=complex)
    t = np.asarray(transmission_coefficient(k, k1, g.length), dtype=complex)
    near = np.abs(k1) * g.length < PARTIALS_GUARD
    with np.errstate(divide="ignore", invalid="ignore"):
        _, t_k, t_k1 = transmission_partials(k, k1, g.length)
        dt = t_k * dk + t_k1 * dk1
    if np.any(near):
        dt = np.asarray(dt, dtype=complex)
        dt[near] = differentiate_central(lambda q: guide_transmission(q, g, cut), nu[near], h0=1e-7)
    return t, np.asarray(dt, dtype=complex)
