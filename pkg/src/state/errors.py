"""
Exception hierarchy for the fixed-point solver.

Axiom and trace checks never raise; they return reports. These exceptions mark
inputs the solver cannot work with at all.
"""
from typing import Optional


class FixpointError(Exception):
    """Base class for every solver error."""


class MixedOrders(FixpointError, ValueError):
    """Two radius values from different orders were compared."""


class EqualPoints(FixpointError, ValueError):
    """A principal ball was requested for two equal points."""


class ContractionViolation(FixpointError):
    """The step distances failed to strictly decrease: the map is not strictly contracting."""


class OracleMembershipViolation(FixpointError):
    """A limit oracle proposed a point outside one of the recorded balls."""


class AccessorViolation(FixpointError):
    """A dense accessor returned an approximant that is not close enough."""


class NotCauchy(FixpointError, ValueError):
    """A limit was requested for a family that is not Cauchy."""


class NonUnit(FixpointError, ArithmeticError):
    """Inverse requested for a residue divisible by the prime."""


class MixedPrecision(FixpointError, ValueError):
    """p-adic operands with different (p, N)."""


class CapMismatch(FixpointError, ValueError):
    """Series operands truncated at different caps."""


class HenselConditionFailed(FixpointError, ValueError):
    """The seed does not satisfy the simple-root Hensel condition."""


class ParseError(FixpointError, ValueError):
    """Malformed instance file, polynomial or flag value."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(f"{message}{where}")


class InvalidInstance(FixpointError, ValueError):
    """An instance failed its load-time axiom checks."""
