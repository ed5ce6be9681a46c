from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .model import NumericsReport


class StsError(Exception):
    """Base class for every error raised by the traversal-time packages."""


class DomainError(StsError, ValueError):
    """An argument lies outside the domain of the operation (E <= 0, nu <= nu_out, ...)."""


class DegenerateInputError(StsError, ValueError):
    """The input is valid but carries no usable weight (fully reflected packet, empty source)."""


class UnsupportedError(StsError, NotImplementedError):
    pass


class NumericError(StsError, RuntimeError):
    """A numerical kernel did not reach its tolerance.

    The partial report is attached so callers can log what was achieved.
    """

    def __init__(self, message: str, report: "NumericsReport | None" = None) -> None:
        super().__init__(message)
        self.report = report


class CoverageError(NumericError):
    def __init__(self, message: str, captured_mass: float, report: "NumericsReport | None" = None) -> None:
        super().__init__(message, report)
        self.captured_mass = captured_mass


class PhaseBranchError(NumericError):
    pass
