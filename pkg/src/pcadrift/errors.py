"""Exception hierarchy; the CLI maps each branch to a distinct exit code."""


class PcadriftError(Exception):
    """Base class for all package errors."""


class ConfigError(PcadriftError):
    """Invalid configuration file, key, or value. CLI exit code 1."""


class DataError(PcadriftError):
    """Malformed or inadequate input data. CLI exit code 2."""


class NumericalError(PcadriftError):
    """Numerical failure during analysis. CLI exit code 3."""


class ConvergenceError(NumericalError):
    """Eigensolver did not converge within its sweep budget."""

    def __init__(self, message: str, off_diagonal_norm: float):
        super().__init__(message)
        self.off_diagonal_norm = off_diagonal_norm


class NotEstimableError(NumericalError):
    """KMO statistic cannot be estimated (singular or identity correlation)."""


class SingularWindowError(NumericalError):
    """A window contains a column with zero sample variance."""
