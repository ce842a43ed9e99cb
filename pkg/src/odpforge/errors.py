"""Exceptions and diagnostics shared across the toolkit."""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"
INFO = "info"


@dataclass(frozen=True, order=True)
class Diagnostic:
    severity: str
    code: str
    element: str
    message: str
    line: int | None = None
    col: int | None = None

    def format(self, path: str | None = None) -> str:
        loc = ""
        if path is not None:
            loc = path
            if self.line is not None:
                loc += f":{self.line}:{self.col or 1}"
            loc += ": "
        return f"{loc}{self.severity}: {self.code}: {self.element}: {self.message}"


class OdpError(Exception):
    """Base class for every error raised by odpforge."""

    code = "Error"


class UnknownElement(OdpError):
    code = "UnknownElement"


class NameCollision(OdpError):
    code = "NameCollision"


class CategoryMismatch(OdpError):
    code = "CategoryMismatch"


class DanglingIdentification(OdpError):
    code = "DanglingIdentification"


class UnknownPattern(OdpError):
    code = "UnknownPattern"


class DuplicateName(OdpError):
    code = "DuplicateName"


class InvalidKindForDatatypeEdge(OdpError):
    code = "InvalidKindForDatatypeEdge"


class TooFewClasses(OdpError):
    code = "TooFewClasses"


class UnsupportedConstruct(OdpError):
    code = "UnsupportedConstruct"


class UnknownEntity(OdpError):
    code = "UnknownEntity"


class CompileError(OdpError):
    code = "CompileError"


class OdpSyntaxError(OdpError):
    code = "SyntaxError"

    def __init__(self, message: str, line: int, col: int, expected: str | None = None):
        self.line = line
        self.col = col
        self.expected = expected
        detail = f"{message} at line {line}, column {col}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class ResolutionError(OdpError):
    """Raised by ``resolve`` with every error diagnostic collected."""

    code = "ResolutionError"

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(f"{d.code}: {d.element}: {d.message}" for d in self.diagnostics)
        super().__init__(lines)
