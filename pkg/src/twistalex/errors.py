"""Exception hierarchy.

The CLI maps ``ValidationError`` to exit code 1 and ``SyntaxProblem`` to
exit code 2; everything else is a bug.
"""


class TwistAlexError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(TwistAlexError, ValueError):
    """Input is well formed but mathematically unusable."""


class SyntaxProblem(TwistAlexError, ValueError):
    """Input text does not follow the grammar.

    ``line`` and ``column`` are 1-based when known.
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)


class DescriptorMismatch(ValidationError):
    """Operands live over different coefficient fields."""


class IndexOutOfRange(ValidationError, IndexError):
    """A generator index does not exist in the presentation."""
