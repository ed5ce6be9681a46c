from .types import SPEED_OF_LIGHT, CurvePoint, Cutoffs, DelayCurve, GuideGeometry, SourceSpec, SweepSpec
from .guide import (
    cutoff_frequencies,
    equivalent_potential,
    guide_transmission,
    guide_transmission_derivative,
    guide_wavenumbers,
    velocities,
    wavenumber_arrays,
)
from .source import OpticalAmplitude, lorentzian_amplitude, lorentzian_amplitude_derivative, source_delay
from .optical import (
    OpticalExpectation,
    SpectralWindow,
    delay_curve,
    delay_evaluator,
    optical_delay,
    optical_entrance_time,
    optical_expected_time,
    spectral_window,
    sweep_curve,
    transmitted_field,
)

__all__ = [
    "SPEED_OF_LIGHT",
    "CurvePoint",
    "Cutoffs",
    "DelayCurve",
    "GuideGeometry",
    "SourceSpec",
    "SweepSpec",
    "cutoff_frequencies",
    "equivalent_potential",
    "guide_transmission",
    "guide_transmission_derivative",
    "guide_wavenumbers",
    "velocities",
    "wavenumber_arrays",
    "OpticalAmplitude",
    "lorentzian_amplitude",
    "lorentzian_amplitude_derivative",
    "source_delay",
    "OpticalExpectation",
    "SpectralWindow",
    "delay_curve",
    "delay_evaluator",
    "optical_delay",
    "optical_entrance_time",
    "optical_expected_time",
    "spectral_window",
    "sweep_curve",
    "transmitted_field",
]
