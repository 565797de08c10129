"""Exception hierarchy shared by every module."""


class PainsenseError(Exception):
    """Base class for all package errors."""


class ConfigError(PainsenseError, ValueError):
    """A configuration value violates its contract.

    ``field`` names the offending configuration key when one is known, so
    the config loader can point at the file line that set it.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class WindowSizeError(PainsenseError, ValueError):
    """A window is too short for trimmed averaging."""


class ArgumentError(PainsenseError, ValueError):
    """An argument is outside the domain of an operation."""


class DegenerateDataError(PainsenseError, ValueError):
    """Data has no variance where a statistic requires it."""
