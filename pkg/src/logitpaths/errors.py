"""Exception types shared across the package.

The CLI maps these onto its exit codes: ConfigError -> 1,
NumericalFailure -> 2, CheckFailure -> 3.
"""


class ConfigError(ValueError):
    """Invalid configuration or input (bad matrix, bad lattice parameter, ...)."""


class NumericalFailure(RuntimeError):
    """A numerical routine failed to converge or produced an inconsistent state."""


class CheckFailure(AssertionError):
    """A verification check ran to completion and found a violation."""
