"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class CopulaMMDError(Exception):
    exit_code = 1


class ConfigError(CopulaMMDError, ValueError):
    """Invalid parameters or configuration."""

    exit_code = 2


class SemiAnalyticUnsupportedError(ConfigError):
    """Raised when a closed-form uniform expectation is requested for a kernel without one."""


class DataError(CopulaMMDError, ValueError):
    """Malformed or unusable input data."""

    exit_code = 3


class NumericalInconsistencyError(CopulaMMDError, ArithmeticError):
    """A quantity that must be nonnegative came out clearly negative."""

    exit_code = 4
