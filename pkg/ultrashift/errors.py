"""Exception hierarchy for ultrashift.

Every error raised on bad input derives from ``UltrashiftError``, which is a
``ValueError`` so callers that only know about ``ValueError`` still catch it.
"""
from typing import Optional


class UltrashiftError(ValueError):
    """Base class for all ultrashift errors."""


class UniverseMismatch(UltrashiftError):
    """Two sets over different universes were combined."""


class ParseError(UltrashiftError):
    """A literal or a presentation file could not be parsed.

    Carries the 1-based line and column of the offending character so the
    CLI can print ``file:line:column`` diagnostics.
    """

    def __init__(self, message: str, line: int = 1, column: int = 1,
                 source: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        location = f"{source}:" if source else ""
        super().__init__(f"{location}{line}:{column}: {message}")


class SinkFound(UltrashiftError):
    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"vertex v_{vertex} emits no edge (sink)")


class EmptyRange(UltrashiftError):
    def __init__(self, edge: int):
        self.edge = edge
        super().__init__(f"edge e_{edge} has an empty range")


class OverlappingIndices(UltrashiftError):
    def __init__(self, first: int, second: int, edge: int):
        self.first = first
        self.second = second
        self.edge = edge
        super().__init__(
            f"families {first} and {second} both define edge e_{edge}"
        )


class InvalidSourceRule(UltrashiftError):
    """A source rule maps some edge index outside the vertex universe."""


class UnknownEdge(UltrashiftError):
    def __init__(self, edge: int):
        self.edge = edge
        super().__init__(f"edge e_{edge} is not defined by any family")


class InvalidPath(UltrashiftError):
    """An edge sequence, ultrapath or point violates the range conditions."""


class NotComposable(UltrashiftError):
    """A concatenation is not defined for the given operands."""


class InvalidCylinder(UltrashiftError):
    """Cylinder data does not describe a basis element."""


class PointsEqual(UltrashiftError):
    """Separation was requested for two equal points."""


class LengthZeroPoint(UltrashiftError):
    """An operation needing length >= 1 received a length-zero point."""


class NotFinite(UltrashiftError):
    """A finite ultragraph was required."""


class TableNotShiftClosed(UltrashiftError):
    def __init__(self, point: str):
        self.point = point
        super().__init__(f"shift of table entry {point} is not in the table")


class RfumRequired(UltrashiftError):
    """The operation needs an ultragraph satisfying Condition (RFUM)."""


class OutsideDomain(UltrashiftError):
    """A partial map was applied outside its domain."""


class NotInGZeroError(UltrashiftError):
    def __init__(self, residual: str):
        self.residual = residual
        super().__init__(f"set is not in G0 (infinite residual {residual})")


class DegenerateWord(UltrashiftError):
    """A free-group word is not of the form a b^-1."""


class CapRequired(UltrashiftError):
    """Enumeration over an infinite universe needs an index cap."""
