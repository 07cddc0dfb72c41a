"""Exception types shared across the package."""


class CitegraphError(Exception):
    """Base class for all citegraph errors."""


class IngestError(CitegraphError):
    """Fatal problem with an input file (unreadable stream, missing header)."""


class GraphBuildError(CitegraphError):
    """Edge list references an id that is not in the record set."""


class UnknownNodeError(CitegraphError):
    """An operation was given a node id that is not in the graph."""


class GraphFileError(CitegraphError):
    """Malformed native graph file."""


class QueryParseError(CitegraphError):
    """Query text could not be parsed; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DrillError(CitegraphError):
    """Invalid drill-down or drill-up request."""


class LayoutError(CitegraphError):
    """Layout constraints cannot be satisfied."""


class ExportError(CitegraphError):
    """Unsupported export format or missing export inputs."""
