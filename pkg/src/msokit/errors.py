"""Exception types shared across the package."""


class MsoError(Exception):
    """Base class for all msokit errors."""


class InputError(MsoError, ValueError):
    """Malformed or inconsistent user input (CLI exit code 2)."""


class ResourceError(MsoError, RuntimeError):
    """A configured size cap would be exceeded (CLI exit code 3)."""
