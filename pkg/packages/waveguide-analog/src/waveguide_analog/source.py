from __future__ import annotations

import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from sts_numerics import DomainError

from .guide import velocities
from .types import Cutoffs, SourceSpec


def _poles(nu: np.ndarray, src: SourceSpec) -> Tuple[np.ndarray, np.ndarray]:
    half = src.lambda_hwhm / 2.0
    upper = 1j * (nu + src.nu_mu) + half
    lower = 1j * (nu - src.nu_mu) - half
    return upper, lower


def lorentzian_amplitude(nu: float | np.ndarray, src: SourceSpec, t_mu: float = 0.0) -> np.ndarray | complex:
    """Klystron line shape with both pole terms and the pre-barrier phase ``e^{-i 2 pi nu t_mu}``."""
    nu_arr = np.asarray(nu, dtype=float)
    norm = math.sqrt(src.lambda_hwhm / (2.0 * math.pi))
    upper, lower = _poles(nu_arr, src)
    value = norm * np.exp(-2j * math.pi * nu_arr * t_mu) * (1.0 / upper - 1.0 / lower)
    if value.ndim == 0:
        return complex(value)
    return value


def lorentzian_amplitude_derivative(nu: float | np.ndarray, src: SourceSpec, t_mu: float = 0.0) -> np.ndarray:
    nu_arr = np.asarray(nu, dtype=float)
    norm = math.sqrt(src.lambda_hwhm / (2.0 * math.pi))
    upper, lower = _poles(nu_arr, src)
    rot = np.exp(-2j * math.pi * nu_arr * t_mu)
    bracket = 1.0 / upper - 1.0 / lower
    d_bracket = -1j / upper**2 + 1j / lower**2
    return norm * rot * (d_bracket - 2j * math.pi * t_mu * bracket)


def source_delay(src: SourceSpec, cut: Cutoffs) -> float:
    """``t_mu = ell / v_phase(nu_mu)`` in the empty guide."""
    if src.ell == 0.0:
        return 0.0
    v_phase, _ = velocities(src.nu_mu, cut)
    return src.ell / float(v_phase)


class OpticalAmplitude(BaseModel):
    """``A_nu`` entering the narrowing, in the configured phase model."""

    model_config = ConfigDict(frozen=True)

    source: SourceSpec
    cutoffs: Cutoffs

    @model_validator(mode="after")
    def _above_cutoff(self) -> "OpticalAmplitude":
        if self.source.nu_mu <= self.cutoffs.nu_out:
            raise DomainError(
                f"line centre {self.source.nu_mu:.6e} Hz lies below the outer cutoff {self.cutoffs.nu_out:.6e} Hz"
            )
        return self

    @property
    def t_mu(self) -> float:
        return source_delay(self.source, self.cutoffs)

    def value(self, nu: np.ndarray) -> np.ndarray:
        t_mu = self.t_mu
        if self.source.phase_model == "causal":
            return np.asarray(lorentzian_amplitude(nu, self.source, t_mu))
        nu = np.asarray(nu, dtype=float)
        modulus = np.abs(lorentzian_amplitude(nu, self.source))
        return modulus * np.exp(-2j * math.pi * nu * t_mu)

    def derivative(self, nu: np.ndarray) -> np.ndarray:
        t_mu = self.t_mu
        if self.source.phase_model == "causal":
            return lorentzian_amplitude_derivative(nu, self.source, t_mu)
        nu = np.asarray(nu, dtype=float)
        bare = np.asarray(lorentzian_amplitude(nu, self.source))
        d_bare = lorentzian_amplitude_derivative(nu, self.source)
        modulus = np.abs(bare)
        d_modulus = np.real(np.conj(bare) * d_bare) / modulus
        rot = np.exp(-2j * math.pi * nu * t_mu)
        return (d_modulus - 2j * math.pi * t_mu * modulus) * rot
