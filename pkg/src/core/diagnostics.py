"""
Diagnostics for the NPT kernel and surface language.

Every failure the kernel can report is a KernelError carrying a Diagnostic:
a fixed error code, a human-readable message, the source span (attached by
the surface layer) and a snapshot of the telescope at the point of failure.
"""

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, Optional


class ErrorCode(str, Enum):
    """The closed set of diagnostic codes."""
    POSITION_NOT_AFFINE = "PositionNotAffine"
    CAPTURE_VIOLATION = "CaptureViolation"
    KIND_MISMATCH = "KindMismatch"
    BUDGET_EXCEEDED = "BudgetExceeded"
    ILL_FORMED_ENTRY_TYPE = "IllFormedEntryType"
    AFFINITY_VIOLATION = "AffinityViolation"
    GEL_FRESHNESS_VIOLATION = "GelFreshnessViolation"
    UNBOUND_VARIABLE = "UnboundVariable"
    NOT_A_FUNCTION = "NotAFunction"
    MOTIVE_MISMATCH = "MotiveMismatch"
    UNIVERSE_EXPECTED = "UniverseExpected"
    TYPE_MISMATCH = "TypeMismatch"
    DUPLICATE_NAME = "DuplicateName"
    NEGATIVE_OCCURRENCE = "NegativeOccurrence"
    NESTED_OCCURRENCE = "NestedOccurrence"
    SYNTAX_ERROR = "SyntaxError"
    UNBOUND_NAME = "UnboundName"
    AMBIGUOUS_BINDER_KIND = "AmbiguousBinderKind"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Span:
    """A 1-based source region."""
    line: int
    col: int
    end_line: int
    end_col: int

    @staticmethod
    def point(line: int, col: int) -> "Span":
        return Span(line, col, line, col)


@dataclass(frozen=True)
class Diagnostic:
    code: ErrorCode
    message: str
    span: Optional[Span] = None
    telescope: Optional[Any] = None  # core.syntax.Telescope snapshot
    file: Optional[str] = None
    declaration: Optional[str] = None

    def with_location(self, span: Optional[Span] = None, file: Optional[str] = None,
                      declaration: Optional[str] = None) -> "Diagnostic":
        """Fill in location fields that are still missing."""
        return replace(
            self,
            span=self.span or span,
            file=self.file or file,
            declaration=self.declaration or declaration,
        )

    def _position(self):
        if self.span is None:
            return 1, 1
        return self.span.line, self.span.col

    def _full_message(self) -> str:
        if self.declaration:
            return f"in `{self.declaration}`: {self.message}"
        return self.message

    def format_text(self) -> str:
        """Render as `ERROR <code> <file>:<line>:<col> <message>`."""
        line, col = self._position()
        return f"ERROR {self.code.value} {self.file or '<input>'}:{line}:{col} {self._full_message()}"

    def to_record(self) -> Dict[str, Any]:
        line, col = self._position()
        return {
            "code": self.code.value,
            "file": self.file or "<input>",
            "line": line,
            "col": col,
            "message": self._full_message(),
        }

    def format_structured(self) -> str:
        return json.dumps(self.to_record(), ensure_ascii=False)


class KernelError(Exception):
    """Raised for every rejected term, declaration or source file."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic

    @property
    def code(self) -> ErrorCode:
        return self.diagnostic.code

    def located(self, span: Optional[Span] = None, file: Optional[str] = None,
                declaration: Optional[str] = None) -> "KernelError":
        return KernelError(self.diagnostic.with_location(span, file, declaration))


def fail(code: ErrorCode, message: str, telescope: Optional[Any] = None,
         span: Optional[Span] = None) -> KernelError:
    """Build a KernelError; callers write `raise fail(...)`."""
    return KernelError(Diagnostic(code=code, message=message, span=span, telescope=telescope))
