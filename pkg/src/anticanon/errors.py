"""Exception hierarchy for the anticanon toolkit.

Every error raised deliberately by the package derives from
:class:`AnticanonError`, so callers can catch the whole family at once.
The CLI maps a few of these to dedicated exit codes.
"""

from __future__ import annotations


class AnticanonError(Exception):
    """Base class for all toolkit errors."""


class ParseError(AnticanonError):
    """Malformed polynomial, field, scalar, or scenario text.

    Carries the offending position when known.
    """

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "")
            message = f"{message} ({where})"
        super().__init__(message)


class ChartMismatch(AnticanonError):
    """Operands live on different charts or ambients."""


class SingularMatrix(AnticanonError):
    """A matrix that must be invertible is not."""


class DegenerateBasis(AnticanonError):
    """The candidate basis has a vanishing determinant section.

    The fields fail to span the tangent space at the generic point, so no
    divisor or metric can be built from them.
    """


class OnDivisor(AnticanonError):
    """Requested evaluation point is on (or numerically too close to) the divisor."""


class BlowupDetected(AnticanonError):
    """A numerically integrated trajectory left the configured safety ball."""


class BadDirection(AnticanonError):
    """Completeness-probe direction is tangent to the divisor at the base point."""


class NotHermitian(AnticanonError):
    """Matrix input violates hermitian symmetry beyond tolerance."""


class NotSemiTorus(AnticanonError):
    """Operation requires a lattice whose normal form has no residual block."""


class PatternViolation(AnticanonError):
    """Hermitian form does not satisfy the zero-block pattern required here."""
