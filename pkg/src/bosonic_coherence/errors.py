"""Exception hierarchy shared by every module of the package."""


class BosonicError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BosonicError, ValueError):
    """A parameter lies outside the domain of the requested operation."""


class DimensionMismatchError(BosonicError, ValueError):
    """Objects with incompatible numbers of modes were combined."""


class NonPhysicalStateError(BosonicError, ValueError):
    """A covariance matrix violates the uncertainty principle."""


class CPViolationError(BosonicError, ValueError):
    """A pair (F, G) does not define a completely positive Gaussian map."""

    def __init__(self, message, min_eigenvalue):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class TruncationError(BosonicError, ValueError):
    """A Fock-space truncation discards more probability than allowed."""


class BoundaryMinimumError(BosonicError, ValueError):
    """A grid search found its minimum at an end of the grid."""
