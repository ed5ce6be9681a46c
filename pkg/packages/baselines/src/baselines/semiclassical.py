from __future__ import annotations

import numpy as np

from sts_numerics import DomainError
from waveguide_analog import GuideGeometry, cutoff_frequencies


def buttiker_landauer_time(nu: float | np.ndarray, g: GuideGeometry) -> np.ndarray | float:
    """Semiclassical traversal time ``L nu / (c sqrt|nu_in^2 - nu^2|)``.

    Below the inner cutoff this is ``m L / (hbar kappa)`` in guide units; above
    it, transit at the in-barrier group speed. Returns ``inf`` at the cutoff.
    """
    cut = cutoff_frequencies(g)
    nu_arr = np.asarray(nu, dtype=float)
    if not np.all(np.isfinite(nu_arr)):
        raise DomainError("frequency must be finite")
    if np.any(nu_arr <= cut.nu_out):
        raise DomainError(f"frequency below the outer cutoff {cut.nu_out:.6e} Hz")
    gap = np.sqrt(np.abs((nu_arr - cut.nu_in) * (nu_arr + cut.nu_in)))
    with np.errstate(divide="ignore"):
        tau = g.length * nu_arr / (g.c * gap)
    if tau.ndim == 0:
        return float(tau)
    return tau


def buttiker_landauer_strength(nu: float | np.ndarray, g: GuideGeometry) -> np.ndarray | float:
    """``tau_BL * sqrt|nu - nu_in|`` (s Hz^1/2), finite through the inner cutoff."""
    cut = cutoff_frequencies(g)
    nu_arr = np.asarray(nu, dtype=float)
    strength = g.length * nu_arr / (g.c * np.sqrt(nu_arr + cut.nu_in))
    if strength.ndim == 0:
        return float(strength)
    return strength
