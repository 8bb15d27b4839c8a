"""Exception types shared across the package.

ConfigurationError covers malformed run setup (bad grids, missing config
fields); DomainError covers inputs outside a formula's region of validity.
The CLI maps them to exit codes 2 and 3 respectively.
"""


class StatArbError(Exception):
    """Base class for all package errors."""


class ConfigurationError(StatArbError):
    """Invalid experiment or CLI configuration."""


class DomainError(StatArbError):
    """Input outside the mathematical domain of an operation."""
