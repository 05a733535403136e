"""Exception types shared by every solver and the CLI."""


class OrienteerError(Exception):
    """Base class for all package errors."""


class InstanceError(OrienteerError, ValueError):
    """Malformed input or an instance outside a solver's precondition.

    ``path`` names the offending field (``"vertices[2].profit"``) when known.
    """

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class ResourceLimitError(OrienteerError):
    """A configured resource guard was tripped (never a silent truncation)."""
