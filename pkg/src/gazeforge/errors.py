"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage errors -> 1, data/checkpoint
errors -> 2, numeric failures -> 3.
"""


class GazeForgeError(Exception):
    """Base class for all package errors."""


class DimensionError(GazeForgeError, ValueError):
    """Tensor/feature shapes do not satisfy an operation's contract."""


class DataError(GazeForgeError, ValueError):
    """Malformed or inconsistent dataset, manifest, or prediction input."""


class CheckpointError(GazeForgeError, ValueError):
    """Corrupt, truncated, or incompatible checkpoint file."""


class NumericError(GazeForgeError, ArithmeticError):
    """Non-finite values where finite ones are required (loss, gradients)."""


class UsageError(GazeForgeError, ValueError):
    """Bad command-line arguments or config keys."""
