"""Exception types and the first-class "inconclusive" search outcome."""

from dataclasses import dataclass


class InvalidArgument(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class BudgetExceeded(RuntimeError):
    """Raised where a truncated answer would be wrong (counts, enumerations)."""

    def __init__(self, message="node budget exhausted", nodes=0):
        self.nodes = nodes
        super().__init__(message)


@dataclass(frozen=True)
class Inconclusive:
    """Search stopped on a budget; says nothing about existence."""

    reason: str = "budget"
    nodes: int = 0

    def __bool__(self):
        # Guards against `if result:` treating a timeout as a hit.
        raise TypeError("Inconclusive has no truth value; test `isinstance(r, Inconclusive)`")
