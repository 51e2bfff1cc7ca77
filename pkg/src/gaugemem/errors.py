"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so library code should raise
the most specific class that applies rather than bare ValueError.
"""


class GaugememError(Exception):
    """Base class for all package errors."""


class ValidationError(GaugememError):
    """Malformed input: bad config, inconsistent operators, unknown keys."""


class ResourceRefusalError(GaugememError):
    """A request whose cost would exceed a configured budget was refused."""


class DataQualityError(GaugememError):
    """Computed data failed a numerical quality gate (degeneracies, drift)."""
