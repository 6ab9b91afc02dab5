"""Exception hierarchy shared by the library and the CLI."""


class LKError(Exception):
    """Base class for every error raised by lkcert."""


class DomainError(LKError, ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(DomainError):
    """A hypothesis of the pipeline does not hold for the given input.

    ``kind`` is a short machine-readable tag, e.g. ``"A-not-quasi-unipotent"``.
    """

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class ResourceError(LKError):
    """An explicit resource cap (dimension, enumeration size) was exceeded."""


class TheoremFalsified(LKError):
    """Hypotheses were verified but the proven conclusion failed.

    Either a bug or a genuine mathematical event; it is never absorbed.
    The offending inputs travel with the exception.
    """

    def __init__(self, message: str, **inputs):
        super().__init__(message)
        self.inputs = inputs
