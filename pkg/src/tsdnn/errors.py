"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Array shapes or lengths are inconsistent with the operation."""


class InvalidSizeError(ValueError):
    """A sample size or index range is too small for the requested operation."""


class StationarityError(ValueError):
    """Requested process parameters do not admit a stationary solution."""


class TrainingDivergedError(RuntimeError):
    """Training produced a non-finite loss; ``epoch`` is where it happened."""

    def __init__(self, epoch: int, message: str = ""):
        self.epoch = epoch
        super().__init__(message or f"training diverged at epoch {epoch}")


class ParseError(ValueError):
    """A text input could not be parsed; ``line`` is the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class SchemaError(ValueError):
    """A structured input is missing required columns or carries unknown keys."""
