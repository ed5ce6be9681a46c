"""Stationary-phase (Wigner) delay of the narrowing."""

from __future__ import annotations

import logging
import math

import numpy as np

from sts_numerics import NumericError, PhaseBranchError, differentiate_central
from waveguide_analog import (
    Cutoffs,
    GuideGeometry,
    cutoff_frequencies,
    guide_transmission_derivative,
    wavenumber_arrays,
)

logger = logging.getLogger(__name__)

CROSS_CHECK_TOL = 1e-6
# stencil step of the finite-difference cross-check, in Hz
CROSS_CHECK_STEP = 1e3
MAX_REFINEMENTS = 20


def _transmitted_wave(nu: np.ndarray, g: GuideGeometry, cut: Cutoffs) -> tuple[np.ndarray, np.ndarray]:
    k, _, dk, _ = wavenumber_arrays(nu, cut)
    t, dt = guide_transmission_derivative(nu, g, cut)
    prop = np.exp(1j * k * g.length)
    return t * prop, (dt + 1j * g.length * dk * t) * prop


def _analytic_phase_time(nu: np.ndarray, g: GuideGeometry, cut: Cutoffs) -> np.ndarray:
    psi, dpsi = _transmitted_wave(nu, g, cut)
    return np.imag(np.conj(psi) * dpsi) / np.abs(psi) ** 2 / (2.0 * math.pi)


def _numeric_phase_time(nu: np.ndarray, g: GuideGeometry, cut: Cutoffs) -> np.ndarray:
    anchor = _transmitted_wave(nu, g, cut)[0]

    def relative_phase(q: np.ndarray) -> np.ndarray:
        shift = np.angle(_transmitted_wave(q, g, cut)[0] * np.conj(anchor))
        if np.any(np.abs(shift) > 0.5 * math.pi):
            raise PhaseBranchError(f"phase turns by more than pi/2 within {CROSS_CHECK_STEP:g} Hz of nu={nu[:3]}")
        return shift

    return np.real(differentiate_central(relative_phase, nu, h0=1.0, scale=CROSS_CHECK_STEP)) / (2.0 * math.pi)


def phase_time(nu: float | np.ndarray, g: GuideGeometry, check: bool = True) -> np.ndarray | float:
    """``tau_PT = (1/2pi) d/dnu arg[T e^{ikL}]`` in seconds.

    The analytic value is compared against a central difference of the locally
    unwrapped phase when ``check`` is set; a mismatch raises ``NumericError``.
    """
    cut = cutoff_frequencies(g)
    nu_arr = np.atleast_1d(np.asarray(nu, dtype=float))
    tau = _analytic_phase_time(nu_arr, g, cut)
    if check:
        numeric = _numeric_phase_time(nu_arr, g, cut)
        mismatch = np.abs(tau - numeric) / np.maximum(np.abs(tau), 1e-15)
        worst = int(np.argmax(mismatch))
        if mismatch[worst] > CROSS_CHECK_TOL:
            raise NumericError(
                f"phase time cross-check failed at nu={nu_arr[worst]:.6e} Hz "
                f"(analytic={tau[worst]:.6e}, numeric={numeric[worst]:.6e})"
            )
    if np.ndim(nu) == 0:
        return float(tau[0])
    return tau


def transmitted_phase(nus: np.ndarray, g: GuideGeometry) -> np.ndarray:
    """Continuous ``arg[T e^{ikL}]`` on an increasing frequency grid.

    Intervals over which the phase time predicts a turn beyond pi/2 are
    bisected until unwrapping is unambiguous; the result is reported on the
    original grid.
    """
    cut = cutoff_frequencies(g)
    nus = np.asarray(nus, dtype=float)
    if nus.ndim != 1 or nus.size == 0 or np.any(np.diff(nus) <= 0):
        raise ValueError("frequency grid must be one-dimensional and strictly increasing")
    grid = nus.copy()
    for rounds in range(MAX_REFINEMENTS + 1):
        tau = _analytic_phase_time(grid, g, cut)
        predicted = math.pi * (tau[1:] + tau[:-1]) * np.diff(grid)
        coarse = np.abs(predicted) > 0.5 * math.pi
        if not coarse.any():
            break
        if rounds == MAX_REFINEMENTS:
            raise PhaseBranchError(f"phase still turns by more than pi/2 per step after {MAX_REFINEMENTS} refinements")
        grid = np.sort(np.concatenate([grid, 0.5 * (grid[:-1] + grid[1:])[coarse]]))
    if rounds:
        logger.debug("phase grid refined | rounds=%d points=%d original=%d", rounds, grid.size, nus.size)
    psi = _transmitted_wave(grid, g, cut)[0]
    steps = np.angle(psi[1:] * np.conj(psi[:-1]))
    phase = np.angle(psi[0]) + np.concatenate([[0.0], np.cumsum(steps)])
    return phase[np.searchsorted(grid, nus)]
