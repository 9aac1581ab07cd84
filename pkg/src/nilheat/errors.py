"""Exception types raised across the package."""


class NilheatError(Exception):
    """Base class for structured errors."""


class DimensionMismatchError(NilheatError):
    pass


class DegenerateCentralCharacterError(NilheatError):
    """Raised for lambda = 0 or k = 0, where the construction degenerates."""


class ExactArithmeticError(NilheatError):
    """Raised when an operation requiring exact rational input gets floats."""


class NotLatticeError(NilheatError):
    """Raised when generators fail a lattice precondition."""


class SectorMismatchError(NilheatError):
    """Raised when a function does not live in the requested sector."""


class TruncationError(NilheatError):
    """Raised when a certified series truncation would exceed its cap."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class QuadratureError(NilheatError):
    """Raised when a quadrature refinement check fails to stabilize."""

    def __init__(self, message, coarse=None, fine=None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


class DivergentNormError(NilheatError):
    """Raised when a weighted norm integral is certifiably divergent."""
