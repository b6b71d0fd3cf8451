"""Exact truncated-polynomial arithmetic and a coordinate jet-bundle toolkit.

All coefficient arithmetic is exact rational: every law the package checks is
an equality assertion with no tolerance policy.
"""

from .errors import (InvariantError, JetweilError, PreconditionError, SchemaError,
                     SingularSystemError, SizeLimitError)

__all__ = [
    "InvariantError",
    "JetweilError",
    "PreconditionError",
    "SchemaError",
    "SingularSystemError",
    "SizeLimitError",
]
