"""Momentum spectra ``C+(k)`` and ``C-(k)`` of a free wave packet.

Every family is a frozen pydantic model exposing the spectrum, its first
derivative and the range of ``k`` outside which ``|C|^2`` falls below a given
fraction of its peak. ``C+`` multiplies ``e^{ikx}`` (right-moving) and ``C-``
multiplies ``e^{-ikx}``.
"""

from __future__ import annotations

import math
from typing import Any, ClassVar, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator
from scipy.interpolate import PchipInterpolator

from sts_numerics import DegenerateInputError, DomainError, differentiate_central, integrate_adaptive
from sts_numerics.model import NumericsReport, QuadratureSpec

from .barrier import barrier_transmission, barrier_transmission_derivative
from .types import BarrierSpec

# support tails, as a fraction of peak |C|^2
CLOSED_FORM_TAIL = 1e-16
ORACLE_TAIL = 1e-10
# norms below this are treated as zero weight
DEGENERATE_NORM = 1e-300


class MomentumSpectrum(BaseModel):
    model_config = ConfigDict(frozen=True)

    # bound on the relative imaginary residue of the flux moments
    reality_tol: ClassVar[float] = 1e-8

    hbar: float = Field(default=1.0, gt=0)
    mass: float = Field(default=1.0, gt=0)

    def plus(self, k: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def minus(self, k: np.ndarray) -> np.ndarray:
        return np.zeros(np.shape(k), dtype=complex)

    def d_plus(self, k: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def d_minus(self, k: np.ndarray) -> np.ndarray:
        return np.zeros(np.shape(k), dtype=complex)

    @property
    def has_minus(self) -> bool:
        return False

    def support(self, tail: float = CLOSED_FORM_TAIL) -> Tuple[float, float]:
        raise NotImplementedError

    def breakpoints(self) -> List[float]:
        return []

    def energy(self, k: np.ndarray) -> np.ndarray:
        """Angular frequency ``E_k / hbar``."""
        return self.hbar * np.asarray(k) ** 2 / (2.0 * self.mass)

    def compatible_with(self, barrier: BarrierSpec) -> None:
        if not (math.isclose(self.hbar, barrier.hbar) and math.isclose(self.mass, barrier.mass)):
            raise DomainError("spectrum and barrier must share hbar and mass")


class _ClosedFormSpectrum(MomentumSpectrum):
    """Shared envelope ``a * h(k) * p(k) * e^{i phi(k)}``.

    ``h(k) = k^2 / (k^2 + w^2)`` makes ``|C|^2 / k`` vanish at ``k = 0``; the phase
    carries the launch position, emission time and linear chirp.
    """

    center: float = Field(gt=0)
    width: float = Field(gt=0)
    amplitude: float = Field(default=1.0, gt=0)
    direction: Literal[1, -1] = 1
    launch_position: float = 0.0
    emission_time: float = 0.0
    chirp: float = 0.0
    threshold_width: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _finite(self) -> "_ClosedFormSpectrum":
        for name in ("center", "width", "amplitude", "launch_position", "emission_time", "chirp"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        return self

    @property
    def _w(self) -> float:
        return self.threshold_width if self.threshold_width is not None else self.width

    def _profile(self, k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def _envelope(self, k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        k = np.asarray(k, dtype=float)
        w2 = self._w**2
        h = k**2 / (k**2 + w2)
        dh = 2.0 * k * w2 / (k**2 + w2) ** 2
        p, dp = self._profile(k)
        s = self.direction
        phi = (
            -s * k * self.launch_position
            + self.hbar * k**2 * self.emission_time / (2.0 * self.mass)
            - self.chirp * (k - self.center) ** 2
        )
        dphi = -s * self.launch_position + self.hbar * k * self.emission_time / self.mass - 2.0 * self.chirp * (
            k - self.center
        )
        rot = self.amplitude * np.exp(1j * phi)
        c = rot * h * p
        dc = rot * (dh * p + h * dp + 1j * dphi * h * p)
        return c, dc

    def plus(self, k: np.ndarray) -> np.ndarray:
        c, _ = self._envelope(k)
        return c if self.direction == 1 else np.zeros_like(c)

    def minus(self, k: np.ndarray) -> np.ndarray:
        c, _ = self._envelope(k)
        return c if self.direction == -1 else np.zeros_like(c)

    def d_plus(self, k: np.ndarray) -> np.ndarray:
        _, dc = self._envelope(k)
        return dc if self.direction == 1 else np.zeros_like(dc)

    def d_minus(self, k: np.ndarray) -> np.ndarray:
        _, dc = self._envelope(k)
        return dc if self.direction == -1 else np.zeros_like(dc)

    @property
    def has_minus(self) -> bool:
        return self.direction == -1

    def breakpoints(self) -> List[float]:
        return [self.center]


class GaussianSpectrum(_ClosedFormSpectrum):
    """``exp(-(k - k0)^2 / (4 sigma^2))``; ``width`` is sigma."""

    def _profile(self, k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        d = k - self.center
        p = np.exp(-(d**2) / (4.0 * self.width**2))
        return p, -d / (2.0 * self.width**2) * p

    def support(self, tail: float = CLOSED_FORM_TAIL) -> Tuple[float, float]:
        half = self.width * math.sqrt(2.0 * math.log(1.0 / tail))
        return max(0.0, self.center - half), self.center + half


class LorentzianSpectrum(_ClosedFormSpectrum):
    """Amplitude profile ``gamma^2 / ((k - k0)^2 + gamma^2)``; ``width`` is gamma."""

    def _profile(self, k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        d = k - self.center
        g2 = self.width**2
        p = g2 / (d**2 + g2)
        return p, -2.0 * d * g2 / (d**2 + g2) ** 2

    def support(self, tail: float = CLOSED_FORM_TAIL) -> Tuple[float, float]:
        half = self.width * tail ** (-0.25)
        return max(0.0, self.center - half), self.center + half


class SampledSpectrum(MomentumSpectrum):
    """Spectrum given on a strictly increasing grid, interpolated by PCHIP.

    Zero outside the grid. Derivatives come from a Richardson-refined central
    difference of the interpolant on the scale of the grid spacing.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
    reality_tol: ClassVar[float] = 1e-6

    k_grid: List[float]
    plus_values: List[complex]
    minus_values: Optional[List[complex]] = None

    _plus: Any = PrivateAttr(default=None)
    _minus: Any = PrivateAttr(default=None)

    @model_validator(mode="after")
    def _check_grid(self) -> "SampledSpectrum":
        grid = np.asarray(self.k_grid, dtype=float)
        if grid.size < 4:
            raise ValueError("at least four samples are needed")
        if not np.all(np.isfinite(grid)) or np.any(grid <= 0):
            raise ValueError("k grid must be positive and finite")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("k grid must be strictly increasing")
        for name in ("plus_values", "minus_values"):
            values = getattr(self, name)
            if values is not None and len(values) != grid.size:
                raise ValueError(f"{name} must match the k grid length")
        return self

    def model_post_init(self, __context: Any) -> None:
        grid = np.asarray(self.k_grid, dtype=float)
        self._plus = self._interpolants(grid, self.plus_values)
        if self.minus_values is not None:
            self._minus = self._interpolants(grid, self.minus_values)

    @staticmethod
    def _interpolants(grid: np.ndarray, values: List[complex]) -> Tuple[PchipInterpolator, PchipInterpolator]:
        arr = np.asarray(values, dtype=complex)
        real = PchipInterpolator(grid, arr.real, extrapolate=False)
        imag = PchipInterpolator(grid, arr.imag, extrapolate=False)
        return real, imag

    @staticmethod
    def _evaluate(pair: Any, k: np.ndarray) -> np.ndarray:
        if pair is None:
            return np.zeros(np.shape(k), dtype=complex)
        re, im = pair
        out = re(k) + 1j * im(k)
        return np.nan_to_num(out, nan=0.0)

    @property
    def _spacing(self) -> float:
        return float(np.median(np.diff(self.k_grid)))

    def plus(self, k: np.ndarray) -> np.ndarray:
        return self._evaluate(self._plus, np.asarray(k, dtype=float))

    def minus(self, k: np.ndarray) -> np.ndarray:
        return self._evaluate(self._minus, np.asarray(k, dtype=float))

    def d_plus(self, k: np.ndarray) -> np.ndarray:
        return np.asarray(differentiate_central(self.plus, k, h0=0.05, scale=self._spacing))

    def d_minus(self, k: np.ndarray) -> np.ndarray:
        if self._minus is None:
            return np.zeros(np.shape(k), dtype=complex)
        return np.asarray(differentiate_central(self.minus, k, h0=0.05, scale=self._spacing))

    @property
    def has_minus(self) -> bool:
        return self.minus_values is not None

    def support(self, tail: float = CLOSED_FORM_TAIL) -> Tuple[float, float]:
        return float(self.k_grid[0]), float(self.k_grid[-1])

    def breakpoints(self) -> List[float]:
        return [float(k) for k in self.k_grid[1:-1]]


class TransmittedSpectrum(MomentumSpectrum):
    """``C+(k) = A(k) T(k)`` for an incident right-moving spectrum ``A``."""

    incident: MomentumSpectrum
    barrier: BarrierSpec

    @model_validator(mode="after")
    def _check_incident(self) -> "TransmittedSpectrum":
        if self.incident.has_minus:
            raise ValueError("incident spectrum must be purely right-moving")
        return self

    def plus(self, k: np.ndarray) -> np.ndarray:
        return self.incident.plus(k) * barrier_transmission(k, self.barrier)

    def d_plus(self, k: np.ndarray) -> np.ndarray:
        return self.incident.d_plus(k) * barrier_transmission(k, self.barrier) + self.incident.plus(
            k
        ) * barrier_transmission_derivative(k, self.barrier)

    def support(self, tail: float = CLOSED_FORM_TAIL) -> Tuple[float, float]:
        return self.incident.support(tail)

    def breakpoints(self) -> List[float]:
        lo, hi = self.support()
        k0 = self.barrier.threshold_wavenumber
        extra = [k0] if lo < k0 < hi else []
        return sorted({*self.incident.breakpoints(), *extra})


def spectrum_norm(
    spectrum: MomentumSpectrum, spec: QuadratureSpec | None = None
) -> Tuple[float, NumericsReport]:
    """``N = integral of |C+|^2 + |C-|^2 over k``; raises on a zero-weight spectrum."""
    lo, hi = spectrum.support()

    def integrand(k: np.ndarray) -> np.ndarray:
        return np.abs(spectrum.plus(k)) ** 2 + np.abs(spectrum.minus(k)) ** 2

    value, report = integrate_adaptive(integrand, lo, hi, spec, breakpoints=spectrum.breakpoints())
    norm = float(np.real(value))
    if norm < DEGENERATE_NORM:
        raise DegenerateInputError(f"spectrum carries no weight (norm={norm:.3e})")
    return norm, report

