"""Exception hierarchy.

Every error raised by the package derives from :class:`QAlphaError`, which is
itself a :class:`ValueError`, so callers that only care about "bad input" can
catch the builtin.
"""


class QAlphaError(ValueError):
    """Base class for all package errors."""


class ValidationError(QAlphaError):
    """An operator failed one of the density-matrix invariants."""

    def __init__(self, invariant, deviation, tolerance):
        self.invariant = invariant
        self.deviation = float(deviation)
        self.tolerance = float(tolerance)
        super().__init__(
            f"{invariant} violated: deviation {self.deviation:.3e} "
            f"exceeds tolerance {self.tolerance:.3e}"
        )


class NotHermitian(ValidationError):
    def __init__(self, deviation, tolerance):
        super().__init__("hermiticity", deviation, tolerance)


class NotPSD(ValidationError):
    def __init__(self, deviation, tolerance):
        super().__init__("positive semi-definiteness", deviation, tolerance)


class TraceNotOne(ValidationError):
    def __init__(self, deviation, tolerance):
        super().__init__("unit trace", deviation, tolerance)


class NotSquare(QAlphaError):
    pass


class DimensionMismatch(QAlphaError):
    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"dimension mismatch: {left} vs {right}")


class ShapeMismatch(QAlphaError):
    pass


class LengthMismatch(QAlphaError):
    pass


class InvalidRank(QAlphaError):
    pass


class InvalidAlpha(QAlphaError):
    pass


class NonCommuting(QAlphaError):
    def __init__(self, deviation, tolerance):
        self.deviation = float(deviation)
        super().__init__(
            f"operators do not commute: max |[A, B]| = {deviation:.3e} > {tolerance:.3e}"
        )


class DegenerateMix(QAlphaError):
    pass


class IncompleteChannel(QAlphaError):
    def __init__(self, deviation, tolerance):
        self.deviation = float(deviation)
        super().__init__(
            f"Kraus completeness violated: max |sum K^dag K - I| = {deviation:.3e} "
            f"> {tolerance:.3e}"
        )


class ConsistencyError(QAlphaError):
    """A quantity that is non-negative by theorem came out clearly negative."""


class ParseError(QAlphaError):
    """Malformed input document. ``location`` names the line or field."""

    def __init__(self, message, location=None):
        self.location = location
        self.message = message
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
