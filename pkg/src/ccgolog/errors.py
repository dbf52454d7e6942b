"""Exception types shared across the package."""


class CcgologError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CcgologError):
    """Syntax error in a program or domain file, with source location."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class DomainError(CcgologError):
    """Ill-formed domain, undeclared name, or sort mismatch."""


class IllegalActionError(CcgologError):
    """An action was performed in a situation where it is not possible."""
