"""Exception hierarchy shared across the package."""


class SoaGuardError(Exception):
    """Base class for all package errors."""


class DocumentParseError(SoaGuardError):
    """Raised when document bytes are not valid canonical-format JSON."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class TableStructureError(SoaGuardError):
    """Raised for structurally invalid tables (ragged rows, empty tables)."""


class DocumentValidationError(SoaGuardError):
    """Raised when a parsed document violates a model invariant."""


class LabelSetError(SoaGuardError):
    """Raised when a training example carries a label outside the task's label set."""


class InsufficientDataError(SoaGuardError):
    """Raised when a training set is too small or misses required labels."""


class ModelChecksumError(SoaGuardError):
    """Raised when a model file's checksum does not match its parameters."""


class ModelTaskError(SoaGuardError):
    """Raised when a model is used for a task it was not trained for."""


class PolicyError(SoaGuardError):
    """Raised for invalid risk-policy configurations."""


class AggregationError(SoaGuardError):
    """Raised when a KRI result set is missing ids or contains duplicates."""


class UnknownDocumentError(SoaGuardError):
    """Raised when a document id is not present in the store."""


class InvalidActionError(SoaGuardError):
    """Raised when a review action targets something that does not exist."""


class SpanError(InvalidActionError):
    """Raised when a highlighted-text span does not resolve inside the document."""


class StaleStateError(SoaGuardError):
    """Raised on optimistic-concurrency conflicts (sequence mismatch)."""


class AuditIntegrityError(SoaGuardError):
    """Raised when the audit log fails replay verification."""
