"""Exception types shared across the package.

The CLI maps these onto exit codes: ParameterError -> 1 (usage/config),
OSError -> 2 (I/O), DataError and subclasses -> 3 (bad data).
"""


class ParameterError(ValueError):
    """A tunable or configuration value is out of its documented range."""


class DataError(ValueError):
    """Input data is malformed or inconsistent."""


class NoDataError(DataError):
    """An operation that requires at least one data point received none."""


class ClusterNotFoundError(KeyError):
    """A cluster identifier is not present in the map/graph it was looked up in."""
