"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the HTTP layer
can map exceptions to response bodies without string matching.
"""

from __future__ import annotations


class AnnocampError(Exception):
    """Base class for all package errors."""

    code = "error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ValidationError(AnnocampError):
    code = "validation"


class NotFoundError(AnnocampError):
    code = "not_found"


class ConflictError(AnnocampError):
    code = "conflict"


class LoadError(AnnocampError):
    """A file (snapshot, vocabulary, collection, config) failed to load."""

    code = "load"


class AuthError(AnnocampError):
    code = "unauthenticated"


class UsageError(AnnocampError):
    code = "usage"
