"""Exception types shared across the package."""


class TrispinError(Exception):
    """Base class for all package-specific errors."""


class InvalidStateError(TrispinError):
    """State data violates a representation invariant (shape, norm, cap)."""


class NotSymmetricError(InvalidStateError):
    """A full-space vector has weight outside the exchange-symmetric subspace."""


class FrameUndefinedError(TrispinError):
    """The mean spin vector is too short to orient the primed frame."""


class DimensionMismatchError(TrispinError):
    """A state vector and an operator live in different spaces."""


class InsufficientShotsError(TrispinError):
    """A measurement run holds too few shots for the requested estimate."""
