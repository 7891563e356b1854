"""Exception hierarchy shared by every margalg module."""


class MargalgError(Exception):
    """Base class for domain errors."""
    pass


class ShapeMismatch(MargalgError, ValueError):
    """A selector, face or table disagrees with the shape it is used with."""
    pass


class DegenerateTotal(MargalgError):
    """The grand total is zero where a nonzero total is required."""
    pass


class RingMismatch(MargalgError):
    """Polynomials from different rings were combined."""
    pass


class ExponentOverflow(MargalgError):
    """A monomial exponent left the 32-bit range."""
    pass


class PolynomialParseError(MargalgError, ValueError):
    """Polynomial text does not follow the canonical grammar."""
    pass


class BudgetExceeded(MargalgError):
    """A Groebner computation ran out of reduction steps.

    Attributes:
        steps: Number of steps consumed when the budget ran out.
        partial: Basis built so far and the number of pairs still pending.
    """

    def __init__(self, message: str, steps: int = 0, partial=None):
        super().__init__(message)
        self.steps = steps
        self.partial = partial


class FaceNotInComplex(MargalgError):
    """A face was requested that is not part of the simplicial complex."""
    pass


class VertexOutOfRange(MargalgError, ValueError):
    """A vertex label lies outside 1..n."""
    pass


class NotAGraph(MargalgError):
    """A complex has a facet with more than two vertices."""
    pass


class CapExceeded(MargalgError):
    """Candidate enumeration was refused because the complex is too large."""
    pass


class UnknownCheck(MargalgError, KeyError):
    """No verification check is registered under the given id."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""
