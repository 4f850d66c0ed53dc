"""Exception types shared across the package.

The CLI maps these onto exit codes: invalid arguments -> 2, numerical
failures -> 3, I/O failures (plain OSError) -> 4.
"""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class NumericalFailureError(ArithmeticError):
    """An iterative numerical procedure exhausted its budget."""


class DatasetError(InvalidArgumentError):
    """A dataset file failed to parse or is unusable (degenerate, non-numeric)."""
