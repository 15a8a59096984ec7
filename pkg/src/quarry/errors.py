"""Exception types shared across the pipeline."""

from __future__ import annotations


class QuarryError(Exception):
    """Base class for all quarry errors."""


class LexError(QuarryError):
    def __init__(self, message: str, file: str, line: int, col: int):
        super().__init__(f"{file}:{line}:{col}: {message}")
        self.file = file
        self.line = line
        self.col = col


class ParseError(QuarryError):
    """Raised when a source file cannot be parsed.

    Carries every diagnostic collected during error recovery, not just
    the first one.
    """

    def __init__(self, diagnostics: list["Diagnostic"]):
        first = diagnostics[0] if diagnostics else None
        super().__init__(str(first) if first else "parse error")
        self.diagnostics = diagnostics


class Diagnostic:
    def __init__(self, message: str, file: str, line: int, col: int):
        self.message = message
        self.file = file
        self.line = line
        self.col = col

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}: {self.message}"

    def __repr__(self) -> str:
        return f"Diagnostic({str(self)!r})"


class LoweringError(QuarryError):
    pass


class EmptyProjectError(QuarryError):
    pass


class DanglingEdgeError(QuarryError):
    pass


class VersionMismatchError(QuarryError):
    pass


class UnknownNodeError(QuarryError):
    pass


class QuerySyntaxError(QuarryError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class UnknownTypeError(QuarryError):
    pass


class UnboundNameError(QuarryError):
    pass


class QueryTypeError(QuarryError):
    pass


class NoDeclarationError(QuarryError):
    pass


class ProviderUnavailableError(QuarryError):
    pass


class UnknownCaseError(QuarryError):
    pass
