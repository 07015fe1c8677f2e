"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: configuration problems exit
with 2, data problems with 3, numeric failures during training with 4.
"""


class VarclassError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(VarclassError):
    """Invalid configuration: bad value, unknown key, schema violation."""


class DataError(VarclassError):
    """Malformed or degenerate input data: catalog rows, matrices, labels."""


class NumericError(VarclassError):
    """Numerical failure during training, e.g. a non-finite loss."""
