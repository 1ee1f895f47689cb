"""Exception types shared across the package.

DataError subclasses signal problems with user-supplied data (files,
identifiers, queries); everything else is a runtime failure. The CLI maps
DataError to exit code 2.
"""


class MapsenseError(Exception):
    """Base class for all package errors."""


class DataError(MapsenseError):
    """A problem with user-supplied data or identifiers."""


class FormatError(DataError):
    """A document could not be parsed.

    Carries the 1-based line number when the format is line-oriented.
    """

    def __init__(self, message: str, *, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        prefix = ""
        if source is not None:
            prefix += f"{source}:"
        if line is not None:
            prefix += f"line {line}: "
        super().__init__(prefix + message)


class HierarchyCycleError(DataError):
    """Concept parent links form a cycle instead of a forest."""


class DanglingReferenceError(DataError):
    """A concept refers to a parent or relation target that does not exist."""


class UnknownConceptError(DataError):
    """A concept id is not present in the ontology."""


class UnknownItemError(DataError):
    """An item id is not present in the store."""


class UnknownPlaceError(DataError):
    """A place name is not present in the gazetteer."""


class MalformedGeometryError(DataError):
    """A GeoJSON geometry is structurally invalid or of an unsupported type."""


class EmptyQueryError(DataError):
    """The query text is empty after trimming."""


class AllTokensRemovedError(DataError):
    """Pre-processing removed every token (query was only stop words / place)."""
