"""Exception types."""


class SynsetKitError(Exception):
    """Base class for all package errors."""


class DataError(SynsetKitError, ValueError):
    """Malformed or inconsistent input data."""


class ParseError(DataError):
    """A line of an input file could not be parsed."""

    def __init__(self, path, lineno, message):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")


class EmptyGraphError(DataError):
    """An edge-list file contained no data lines."""


class UnknownVertexError(SynsetKitError, KeyError):
    """A vertex was requested that is not in the graph."""

    def __str__(self):
        return f"unknown vertex: {self.args[0]!r}"


class InconsistentInventoryError(DataError):
    """A sense inventory does not cover a word it refers to."""
