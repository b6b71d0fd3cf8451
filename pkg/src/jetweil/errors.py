class JetweilError(Exception):
    """Base class for all package errors."""


class SchemaError(JetweilError):
    """A payload (JSON input, object expression, ...) is malformed."""


class PreconditionError(JetweilError):
    """An operation was called on inputs violating its stated precondition."""


class SizeLimitError(PreconditionError):
    """An enumeration guard was exceeded."""


class InvariantError(JetweilError):
    """A law the package treats as non-negotiable failed on concrete data.

    Carries the offending data in ``payload`` when available.
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


class SingularSystemError(InvariantError):
    """A gluing system that must be uniquely solvable was not."""
