"""Exception types shared across the package."""


class PrecisionError(ArithmeticError):
    """A truncation level is too low to decide the requested quantity."""


class BoundsError(ValueError):
    """Declared finite-model bounds do not close the computation."""


class DslError(ValueError):
    """Lexical, syntactic or semantic problem in a script, with a location."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        self.bare_message = message
        if line is not None:
            message = f"{message} at line {line}, column {column}"
        super().__init__(message)
