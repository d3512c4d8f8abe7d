"""Exception types shared across the solver suite."""


class PipewaveError(Exception):
    """Base class for all pipewave errors."""


class DomainError(PipewaveError, ValueError):
    """Input outside the physical or numerical domain of validity."""


class SonicError(PipewaveError):
    """Sonic or vacuum degeneracy: characteristic directions are lost."""


class RegimeError(PipewaveError):
    """A computed state left the subsonic small-amplitude regime.

    Carries optional diagnostics (the offending state / report) so callers
    can dump it instead of losing the evidence.
    """

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class CFLError(PipewaveError):
    """Requested time step violates the CFL precondition."""


class ConvergenceError(PipewaveError):
    """Fixed-point iteration ran out of sweeps before reaching tolerance."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ConfigError(PipewaveError):
    """Configuration failed validation; carries every violation found."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InsufficientDataError(PipewaveError):
    """Too few usable data points for a requested fit."""
