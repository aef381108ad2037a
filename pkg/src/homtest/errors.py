"""Exception types raised across the package."""


class HomtestError(Exception):
    """Base class for all library errors."""


class InvalidElement(HomtestError, ValueError):
    """An element encoding does not belong to the group it was used with."""


class TooLarge(HomtestError):
    """An enumeration would exceed the configured cap."""


class Unsupported(HomtestError):
    """The requested family, projection or path is not available."""


class OutOfTheoremRange(HomtestError):
    """The arity k is outside the range where a soundness theorem applies."""


class ConfigError(HomtestError):
    """An experiment configuration could not be parsed or constructed."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
