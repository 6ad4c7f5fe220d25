"""Exception types shared across the package."""


class MaxKCoverError(Exception):
    """Base class for all package-specific errors."""


class InputError(MaxKCoverError, ValueError):
    """A caller-supplied argument violates a documented precondition."""


class ParseError(MaxKCoverError, ValueError):
    """A text input could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(MaxKCoverError, RuntimeError):
    """A computation would exceed the configured memory/work budget."""


class InternalInvariantError(MaxKCoverError, AssertionError):
    """An internal guarantee failed; indicates an implementation bug."""
