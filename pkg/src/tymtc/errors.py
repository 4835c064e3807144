"""Exception types shared across the package."""


class TymtcError(Exception):
    """Base class for all errors raised by this package."""


class ResourceBoundError(TymtcError):
    """A desk-scale bound (group order, field order, search size) was exceeded."""


class InvariantViolation(TymtcError):
    """An identity that must hold by construction failed; indicates a bug or bad input."""


class DegenerateFormError(TymtcError):
    """A criterion-level operation was given a degenerate or asymmetric form."""


class ArityError(TymtcError, ValueError):
    """An element, character or matrix does not match the shape of its group."""
