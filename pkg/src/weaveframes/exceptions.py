"""Exception hierarchy shared by every module of the package."""


class FrameError(ValueError):
    """Base class for all input and certification errors."""


class ShapeError(FrameError):
    """Operator or vector dimensions do not agree."""


class NotHermitianError(FrameError):
    """Skew-Hermitian part is too large to be rounding noise."""


class NotPSDError(FrameError):
    """An operator that must be positive semidefinite has a material negative eigenvalue."""


class DegenerateOperatorError(FrameError):
    """An operator that must be nonzero vanishes within tolerance."""


class ControlError(FrameError):
    """A control operator is not in GL+ or the control pair does not commute."""


class UncertifiableError(FrameError):
    """The standing commutation assumption fails, so no bound is certified."""


class CapExceededError(FrameError):
    """Exhaustive subset enumeration was requested above the member cap."""
