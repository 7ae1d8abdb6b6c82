"""
Exception hierarchy for the re-ranking pipeline.

Validation problems subclass ValueError so callers that already catch
ValueError keep working; numerical failures subclass ArithmeticError.
The CLI maps the two families to distinct exit codes.
"""

__all__ = [
    "GazbyError",
    "ValidationError",
    "ShapeError",
    "FormatError",
    "ConfigError",
    "CheckpointError",
    "NumericalError",
]


class GazbyError(Exception):
    """Root of every error raised by this package."""


class ValidationError(GazbyError, ValueError):
    """Input, shape or format rejected before any computation."""


class ShapeError(ValidationError):
    """Tensor extents do not line up for an operation."""


class FormatError(ValidationError):
    """A data file line could not be parsed."""

    def __init__(self, message: str, path: str | None = None, line_no: int | None = None):
        location = ""
        if path is not None:
            location = f"{path}:{line_no}: " if line_no is not None else f"{path}: "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line_no = line_no


class ConfigError(ValidationError):
    """Run configuration is invalid."""


class CheckpointError(ValidationError):
    """Checkpoint manifest, payload or config echo does not match."""


class NumericalError(GazbyError, ArithmeticError):
    """Non-finite values, non-deterministic functions or diverged training."""

    def __init__(self, message: str, step: int | None = None):
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)
        self.step = step
