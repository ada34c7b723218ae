"""Exception hierarchy for the max-plus toolkit."""


class MaxPlusError(Exception):
    """Base class for domain errors raised by this package."""


class DimensionMismatch(MaxPlusError, ValueError):
    pass


class ParseError(MaxPlusError, ValueError):
    """Malformed matrix or vector file; carries a 1-based position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class NegativeEntry(MaxPlusError, ValueError):
    pass


class AcyclicMatrix(MaxPlusError, ValueError):
    """The digraph has no cycle, so the eigenvalue is -inf."""


class DivergentStar(MaxPlusError, ValueError):
    """Kleene star requested for a matrix with positive cycle mean."""


class NotDefinite(MaxPlusError, ValueError):
    pass


class NotIrreducible(MaxPlusError, ValueError):
    pass


class NotVisualized(MaxPlusError, ValueError):
    pass


class NonCriticalNode(MaxPlusError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "non-critical node"


class NotStronglyConnectedCritical(MaxPlusError, ValueError):
    pass


class CoverageGap(MaxPlusError, ValueError):
    pass


class CapExceeded(MaxPlusError, RuntimeError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"no transient found up to cap={cap}")


class GammaOverflow(MaxPlusError, OverflowError):
    pass
