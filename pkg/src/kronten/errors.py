"""Exceptions shared across the package."""


class KrontenError(Exception):
    """Base class for errors raised by kronten."""


class ShapeError(KrontenError, ValueError):
    """Operands have incompatible orders or dimensions."""


class BudgetError(KrontenError, ValueError):
    """Materializing a tensor would exceed the element budget."""


class NoConvergenceError(KrontenError, RuntimeError):
    """No iterative solver start reached the requested tolerance."""


class ParseError(KrontenError, ValueError):
    """A text file does not conform to its declared format."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
