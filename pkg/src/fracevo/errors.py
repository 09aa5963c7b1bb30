"""Exception types raised by fracevo."""


class FracEvoError(Exception):
    """Base class for all library errors."""


class DomainError(FracEvoError, ValueError):
    """Argument outside the domain where a function is defined."""


class PoleError(DomainError):
    """Argument sits on a pole (e.g. Gamma at a non-positive integer)."""


class WeightError(FracEvoError, ValueError):
    """A weight distribution violates a hard invariant."""


class CapabilityError(FracEvoError):
    """Requested precision/order exceeds what double precision supports."""


class ContourError(FracEvoError):
    """Numerical inversion produced non-finite values or bad symmetry."""


class SingularResolventError(FracEvoError):
    """The resolvent point coincides with an eigenvalue of the generator."""


class QuadratureError(FracEvoError):
    """A quadrature did not reach its accuracy target."""


class TailMassError(QuadratureError):
    """The tail of a subordination density could not be certified small."""


class AccuracyWarning(UserWarning):
    """Evaluation outside the validated accuracy regime."""
