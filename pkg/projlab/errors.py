"""Exception hierarchy shared by every projlab module."""

from typing import Optional


class ProjLabError(Exception):
    """Base class for all projlab failures."""


class EnumerationTooLarge(ProjLabError):
    """A requested enumeration exceeds the configured cardinality cap."""

    def __init__(self, what: str, count: int, cap: int):
        super().__init__(f"enumeration too large: {what} has {count} members (cap {cap})")
        self.count = count
        self.cap = cap


class MixedDegrees(ProjLabError):
    """An operation that needs a homogeneous index set got mixed degrees."""


class DimensionMismatch(ProjLabError):
    """Vector, multi-index or space dimensions disagree."""


class OutOfRange(ProjLabError):
    """An argument lies outside the documented domain of an operation."""


class DualNotImplemented(ProjLabError):
    """The Köthe dual of this family is not available as a full norm."""


class NoClosedForm(ProjLabError):
    """No closed formula for this family/index combination; use brute force."""


class OracleInconclusive(ProjLabError):
    """The multi-start optimizer did not converge on any restart."""

    def __init__(self, message: str, lo: Optional[float] = None,
                 hi: Optional[float] = None):
        super().__init__(message)
        self.lo = lo
        self.hi = hi


class QuadratureError(ProjLabError):
    """A quadrature did not reach its requested tolerance."""


class RootIsolationError(ProjLabError):
    """Real roots of a polynomial could not be isolated."""


class BudgetExceeded(ProjLabError):
    """A work budget (enumeration size, iteration count) was exhausted."""


class ConfigError(ProjLabError):
    """Malformed configuration file or value."""


class ParseError(ProjLabError):
    """Unparseable command-line flag or descriptor string."""


class InvariantViolation(ProjLabError):
    """An identity that must hold by construction failed numerically."""


class Cancelled(ProjLabError):
    """The shutdown event fired before every task ran."""
