"""Exception types shared across the engine.

Every error carries a stable machine-readable ``code`` so the HTTP layer can
map engine failures onto API responses without string matching.
"""


class GraphVisError(Exception):
    code = "internal-error"


class UnknownGraphError(GraphVisError):
    code = "unknown-graph"


class UnknownNodeError(GraphVisError):
    code = "unknown-node"


class UnknownEdgeError(GraphVisError):
    code = "unknown-edge"


class SelfLoopError(GraphVisError):
    code = "self-loop-rejected"


class DuplicateEdgeError(GraphVisError):
    code = "duplicate-edge-rejected"


class InvalidValueError(GraphVisError):
    """Rejected scalar payload: empty attribute key, non-finite weight, bad type."""

    code = "invalid-value"


class InvalidMutationError(GraphVisError):
    code = "invalid-mutation"


class UnknownMeasureError(GraphVisError):
    code = "unknown-measure"


class InvalidSpecError(GraphVisError):
    """Malformed generator/filter/partition specification."""

    code = "invalid-spec"


class UnknownFormatError(GraphVisError):
    code = "unknown-format"


class UnsupportedExportError(GraphVisError):
    code = "unsupported-export"


class NoTemporalDataError(GraphVisError):
    code = "no-temporal-data"


class MissingLayoutError(GraphVisError):
    code = "missing-layout-entry"


class EmptyFilterError(GraphVisError):
    code = "empty-filter-chain"


class EmptyValuesError(GraphVisError):
    """Distribution requested over an empty value collection."""

    code = "empty-values"


class WorkspaceFormatError(GraphVisError):
    code = "invalid-workspace"


class ParseError(GraphVisError):
    """Input could not be parsed; carries a 1-based line/column position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column

    code = "parse-error"

    @property
    def position(self) -> tuple[int | None, int | None]:
        return (self.line, self.column)

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        base = super().__str__()
        if self.line is not None:
            loc = f"line {self.line}"
            if self.column is not None:
                loc += f", column {self.column}"
            return f"{base} ({loc})"
        return base
