"""
Exception hierarchy for sectorix.
Every failure an operation can report is one of these; the CLI maps them to exit code 2.
"""

from typing import Optional


class SectorixError(Exception):
    """Base class for all sectorix errors."""


class ShapeError(SectorixError):
    """Operand is not square, or operand shapes do not match."""


class NonFiniteError(SectorixError):
    """Operand contains NaN or Inf entries."""


class NotHermitianError(SectorixError):
    """Operand is not Hermitian within tolerance."""


class NotPositiveDefiniteError(SectorixError):
    """Operand is not (semi)definite where the operation requires it."""


class SingularMatrixError(SectorixError):
    """Operand is numerically singular."""

    def __init__(self, message: str, ratio: Optional[float] = None):
        super().__init__(message)
        self.ratio = ratio


class ConvergenceError(SectorixError):
    """An iterative routine hit its iteration, range or refinement cap."""


class NotAccretiveError(SectorixError):
    """Operand has a real part that is not positive definite."""


class BracketError(SectorixError):
    """Sector-angle bisection could not bracket a root."""


class GenerationError(SectorixError):
    """Random instance generation gave up after the resample budget."""


class MapSpecError(SectorixError):
    """Positive map description is inconsistent or misused."""


class UnknownCheckError(SectorixError):
    """Catalogue identifier is not registered."""


class ConfigError(SectorixError):
    """Configuration or input file is invalid."""
