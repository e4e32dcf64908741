"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ArbScarfError(Exception):
    """Base class for all errors raised by this package."""


class InstanceError(ArbScarfError, ValueError):
    """An instance, tree or preference system is malformed."""


class ParseError(InstanceError):
    """Instance text could not be parsed."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class NotATree(InstanceError):
    """The arcs do not form a tree on the vertex set."""


class NotArborescence(InstanceError):
    """The arcs form a directed tree that is not rooted at the given root."""


class NotDirectedPath(InstanceError):
    """A hyperedge arc's tree path goes against some arc orientation."""

    def __init__(self, edge: int, message: str = ""):
        self.edge = edge
        super().__init__(message or f"tree path of edge {edge} is not directed")


class BadInterval(InstanceError):
    """An interval bound lies outside ``1..n`` or is reversed."""


class InvalidSystem(InstanceError):
    """A preference system failed validation."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(self.violations))


class NotABasis(ArbScarfError):
    """A column set does not index a nonsingular submatrix."""

    def __init__(self, cycle=(), message: str = ""):
        self.cycle = tuple(cycle)
        super().__init__(message or f"columns contain the cycle {list(self.cycle)}")


class Unbounded(ArbScarfError):
    """No leaving candidate exists for a cardinal pivot."""


class IterationLimitExceeded(ArbScarfError):
    """A pivoting run did not terminate within its iteration cap."""


class InvariantViolation(ArbScarfError):
    """An internal invariant failed; this indicates a bug, not bad input."""


class NoForwardArc(InvariantViolation):
    """The entering arc's basis-tree path has no forward arc."""


class RightmostIsSingleton(InvariantViolation):
    """The rightmost column of an ordinal basis is not in any block."""


class DimensionMismatch(ArbScarfError, ValueError):
    """A vector's length does not match the number of hyperedges."""


class TooLarge(ArbScarfError, ValueError):
    """An exhaustive search was requested beyond its size cap."""
