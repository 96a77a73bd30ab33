"""
Exception hierarchy shared by every package.

Each error carries the process exit code the command layer reports for it.
"""
from typing import Iterable, Optional

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


class ExpCertError(Exception):
    """Base class for all library errors"""
    exit_code = EXIT_INPUT

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ParseError(ExpCertError):
    """Syntax error with a 1-based position and the expected-token set"""

    def __init__(self, detail: str, line: int, column: int, expected: Optional[Iterable[str]] = None):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected or ())))
        message = f"{line}:{column}: {detail}"
        if self.expected:
            message += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(message)


class ArityError(ExpCertError):
    """Equation count does not match variable count"""


class MissingVariableError(ExpCertError):
    """Substitution or evaluation without a value for some variable"""


class ResourceLimitExceeded(ExpCertError):
    """Normalizer depth or size limit hit; not a mathematical failure"""
    exit_code = EXIT_BUDGET


class DomainError(ExpCertError):
    """Operation undefined on the given enclosure (inverse of 0, log of a non-positive)"""
    exit_code = EXIT_NEGATIVE


class SelectionError(ExpCertError):
    """Certificates cannot be ordered, or the requested index is out of range"""
    exit_code = EXIT_NEGATIVE


class CertificationError(ExpCertError):
    """Re-certification failed at the maximum precision"""
    exit_code = EXIT_BUDGET


class CandidateSetEmpty(ExpCertError):
    """A generator system has no certified root in its search box"""
    exit_code = EXIT_NEGATIVE

    def __init__(self, index: int, reason: str):
        self.index = index
        self.reason = reason
        super().__init__(f"B_{index} is empty: {reason}")
