"""Exception types raised across the package."""


class PostselError(ValueError):
    """Base class for invalid inputs and impossible requests."""


class FormatError(PostselError):
    """A text file could not be parsed; ``line`` is 1-based (0 if unknown)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class PostselectionImpossible(PostselError):
    """Some input gives the post-selection event probability zero."""

    def __init__(self, x: str):
        self.x = x
        super().__init__(f"post-selection event impossible on input x={x}")


class AttemptsExhausted(PostselError):
    """Rejection sampling saw only the discarded outcome for ``attempts`` tries."""

    def __init__(self, attempts: int):
        self.attempts = attempts
        super().__init__(f"no non-bottom outcome after {attempts} attempts")


class CapExceeded(PostselError):
    """Instance is larger than the exhaustive routines are configured for."""
