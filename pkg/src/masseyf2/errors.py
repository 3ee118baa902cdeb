"""Exception types.  Every domain refusal carries a machine-readable ``code``."""

from __future__ import annotations


class MasseyError(Exception):
    code = "error"

    def __init__(self, message: str, code: str | None = None, **data) -> None:
        super().__init__(message)
        if code is not None:
            self.code = code
        self.data = data


class ContractViolation(MasseyError, ValueError):
    code = "contract_violation"


class PresentationError(MasseyError):
    """Malformed presentation text; carries 1-based line and column."""

    code = "parse_error"

    def __init__(self, message: str, line: int = 0, column: int = 0, code: str | None = None) -> None:
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message, code=code, line=line, column=column)


class InvalidPresentation(MasseyError):
    code = "invalid_presentation"


class TruncationOverflow(MasseyError):
    code = "truncation_overflow"


class DegreeUnavailable(MasseyError):
    code = "degree_unavailable"


class NotACycle(MasseyError):
    code = "not_a_cycle"


class BracketUndefined(MasseyError):
    code = "bracket_undefined"


class OracleCapExceeded(MasseyError):
    code = "oracle_cap_exceeded"
