"""Exception types shared across the package."""


class CantorCirclesError(Exception):
    """Base class for all package errors."""


class NonConvergence(CantorCirclesError):
    """Newton iteration exhausted its budget without meeting tolerance."""


class DerivativeUnderflow(CantorCirclesError):
    """Newton step rejected because the derivative is numerically zero."""


class SingularJacobian(CantorCirclesError):
    """The Jacobian of a Newton system could not be inverted."""


class ConstraintViolated(CantorCirclesError):
    """A degree vector or parameter fails its admissibility constraint."""


class DegenerateDenominator(CantorCirclesError):
    """A coefficient formula hit a vanishing denominator."""


class CertificateFailed(CantorCirclesError):
    """A numerical certificate check did not pass."""


class OutOfBand(CantorCirclesError):
    """A point lies inside a trap region, outside every symbol band."""


class ContinuationBreakdown(CantorCirclesError):
    """Curve continuation stalled, typically near a critical value."""


class SeedNotFound(CantorCirclesError):
    """No in-band preimage seed could be located for a pullback."""


class OrbitEscaped(CantorCirclesError):
    """A forward orbit left the symbol bands before the requested length."""


class Undecidable(CantorCirclesError):
    """An itinerary without a periodic tail cannot be classified."""


class DegenerateCurve(CantorCirclesError):
    """A polyline with repeated vertices cannot be measured."""
