"""Exception taxonomy shared across the engine."""


class MazeKitError(Exception):
    """Base class for all engine errors."""


class ParseError(MazeKitError):
    """Malformed maze document or program text."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SchemaError(MazeKitError):
    """Structurally valid input that violates a maze invariant."""


class LimitError(MazeKitError):
    """A format or search limit was exceeded (depth, count, length)."""


class CapacityError(MazeKitError):
    """Entity count exceeds the bitmask encoding caps."""


class PreconditionError(MazeKitError):
    """Caller violated an operation precondition."""


class PatchFailure(MazeKitError):
    """Trace-equivalence could not be restored after a rewrite."""


class StaleSessionError(MazeKitError):
    """Hint session bound to a maze snapshot that has since changed."""
