from .errors import (
    CoverageError,
    DegenerateInputError,
    DomainError,
    NumericError,
    PhaseBranchError,
    StsError,
    UnsupportedError,
)
from .model import NumericsReport, QuadratureSpec
from .quadrature import TailEnvelope, integrate_adaptive, truncate_semi_infinite
from .differentiate import differentiate_central
from .roots import sqrt_diff_of_squares, upper_sqrt
from .settings import NumericsSettings, default_quadrature

__all__ = [
    "CoverageError",
    "DegenerateInputError",
    "DomainError",
    "NumericError",
    "PhaseBranchError",
    "StsError",
    "UnsupportedError",
    "NumericsReport",
    "QuadratureSpec",
    "TailEnvelope",
    "integrate_adaptive",
    "truncate_semi_infinite",
    "differentiate_central",
    "sqrt_diff_of_squares",
    "upper_sqrt",
    "NumericsSettings",
    "default_quadrature",
]
