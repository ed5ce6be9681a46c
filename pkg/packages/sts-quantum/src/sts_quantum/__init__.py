from .types import BarrierSpec, Wavenumbers
from .barrier import (
    barrier_transmission,
    barrier_transmission_derivative,
    inside_wavenumber,
    transfer_matrix_transmission,
    transmission_coefficient,
    transmission_partials,
    transmission_probability,
    wavenumbers,
)
from .spectra import (
    GaussianSpectrum,
    LorentzianSpectrum,
    MomentumSpectrum,
    SampledSpectrum,
    TransmittedSpectrum,
    spectrum_norm,
)
from .expectation import (
    TimeExpectation,
    TimeGrid,
    delay_time,
    expected_time_after_barrier,
    expected_time_closed,
    expected_time_direct,
    oracle_time_grid,
    post_barrier_spectrum,
    rho_on_grid,
    rho_t_given_x,
)

__all__ = [
    "BarrierSpec",
    "Wavenumbers",
    "barrier_transmission",
    "barrier_transmission_derivative",
    "inside_wavenumber",
    "transfer_matrix_transmission",
    "transmission_coefficient",
    "transmission_partials",
    "transmission_probability",
    "wavenumbers",
    "GaussianSpectrum",
    "LorentzianSpectrum",
    "MomentumSpectrum",
    "SampledSpectrum",
    "TransmittedSpectrum",
    "spectrum_norm",
    "TimeExpectation",
    "TimeGrid",
    "delay_time",
    "expected_time_after_barrier",
    "expected_time_closed",
    "expected_time_direct",
    "oracle_time_grid",
    "post_barrier_spectrum",
    "rho_on_grid",
    "rho_t_given_x",
]
