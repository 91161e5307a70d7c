"""Exception hierarchy shared across the package."""

from __future__ import annotations


class TfeaError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TfeaError):
    """A corpus, schema, or report file could not be parsed.

    Carries the offending path and a location hint (doc id, role, ...)
    so callers can report actionable messages.
    """

    def __init__(self, path: str, message: str, location: str | None = None):
        self.path = path
        self.location = location
        where = f"{path}" if location is None else f"{path} ({location})"
        super().__init__(f"{where}: {message}")


class SchemaMismatch(TfeaError):
    """A corpus references a role that the schema does not define."""

    def __init__(self, role: str, doc_id: str | None = None):
        self.role = role
        self.doc_id = doc_id
        where = "" if doc_id is None else f" in document '{doc_id}'"
        super().__init__(f"role '{role}'{where} is not defined by the schema")


class ComplexityGuardExceeded(TfeaError):
    """Exhaustive matching would enumerate more candidates than the cap allows."""

    def __init__(self, doc_id: str, what: str, count: int, cap: int):
        self.doc_id = doc_id
        self.what = what
        self.count = count
        self.cap = cap
        super().__init__(
            f"document '{doc_id}': {what} ({count}) exceeds the configured cap ({cap})"
        )


class InconsistentLog(TfeaError):
    """A transformation log references a filler or template already consumed."""


class UnmappableSequence(TfeaError):
    """A transformation group matches no error-type mapping rule."""

    def __init__(self, kinds, subject):
        self.kinds = kinds
        self.subject = subject
        names = ", ".join(sorted(k.value for k in kinds))
        super().__init__(f"no error type maps to transformation group [{names}] on {subject}")


class InfeasibleSpec(TfeaError):
    """An injection spec requests errors the gold corpus cannot host."""

    def __init__(self, error_type, reason: str):
        self.error_type = error_type
        super().__init__(f"cannot inject {error_type}: {reason}")


class IncompatibleReports(TfeaError):
    """Reports being compared were produced against different schemas."""
