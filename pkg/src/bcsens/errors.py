"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, ValidationError -> 3,
SolverError (and subclasses) -> 4.
"""


class BcsensError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(BcsensError):
    """Malformed configuration, expression, or command-line input."""


class ValidationError(BcsensError):
    """A fatal problem-condition check failed (e.g. boundary starts at or
    below the initial state)."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SolverError(BcsensError):
    """Numerical solve failed (grid invariant violated, non-finite values)."""


class RootFindError(SolverError):
    """Monotone inversion did not converge; carries the offending point."""

    def __init__(self, message, t=None, z=None):
        super().__init__(message)
        self.t = t
        self.z = z


class OverflowGuardError(SolverError):
    """Log-scale path weight exceeded the configured cap."""
