"""Exception types raised across the package."""


class RetroError(Exception):
    """Base class for all errors raised by retrostate."""


class DegenerateLeadingCoefficient(RetroError, ValueError):
    """Leading coefficient of the target is zero; restate it at lower N."""


class MismatchedDegree(RetroError, ValueError):
    pass


class NotUnitary(RetroError, ValueError):
    pass


class NotOrthonormal(RetroError, ValueError):
    pass


class NotNormalized(RetroError, ValueError):
    pass


class ZeroFirstColumnElement(RetroError, ValueError):
    """A first-column element of the multiport vanishes (or is below threshold)."""


class Beta0NotZero(RetroError, ValueError):
    """Inverting for the coherent amplitudes produced a nonzero amplitude for port 0."""


class ZeroColumnEntry(RetroError, ValueError):
    pass


class ZeroBeta(RetroError, ValueError):
    """No coherent drive is required; use the all-vacuum plan instead."""


class NotConverged(RetroError, RuntimeError):
    pass


class DimensionTooLarge(RetroError, ValueError):
    pass


class PhotonNumberMismatch(RetroError, ValueError):
    pass


class CutoffTooSmall(RetroError, ValueError):
    pass


class PlanFormatError(RetroError, ValueError):
    """A plan or matrix document does not match its schema."""
