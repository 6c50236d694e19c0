"""Exception hierarchy.

Law failures are never exceptions: they come back as a false ``Verdict``.
Exceptions are reserved for inputs that cannot be interpreted at all.
"""


class DLError(Exception):
    """Base class for all errors raised by dlkit."""


class MalformedError(DLError, ValueError):
    """Dangling ids, non-total maps, wrong endpoints."""


class ComposabilityError(DLError, ValueError):
    """Two morphisms (or transformations) that do not compose."""


class ValidationError(DLError, ValueError):
    """A diagram violates one of its structural invariants."""


class DLSyntaxError(DLError, SyntaxError):
    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class InferenceError(DLError):
    """The type of some diagram component could not be inferred."""

    def __init__(self, message, nodes=()):
        self.nodes = tuple(nodes)
        super().__init__(message)


class ElaborationError(DLError):
    pass


class UnsupportedError(DLError):
    pass


class TypeCheckError(DLError, TypeError):
    pass


class ArtifactError(DLError):
    """A file failed to load; ``location`` is a JSON pointer when known."""

    def __init__(self, message, location=None):
        self.location = location
        where = f" (at {location})" if location else ""
        super().__init__(f"{message}{where}")
