"""Exception hierarchy shared across the package."""


class CredalkitError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(CredalkitError):
    """Shapes or label sets of two objects do not line up."""


class ValidationError(CredalkitError):
    """Input data violates a documented invariant."""


class ZeroProbabilityError(CredalkitError):
    """Conditioning event has (numerically) zero probability."""


class EmptySetError(CredalkitError):
    """An operation produced or received an empty credal set."""


class EmptyConditionalError(EmptySetError):
    """No distribution in the set gives the observation positive probability."""


class UnboundedPolytopeError(CredalkitError):
    """Constraint set has a nonzero recession direction."""


class SizeLimitError(CredalkitError):
    """Problem size exceeds a documented enumeration bound."""


class NumericalError(CredalkitError):
    """A solver could not certify its result within tolerance."""


class CertificateError(CredalkitError):
    """Equilibrium certificate residuals exceed tolerance.

    Carries the offending equilibrium and certificate so callers can inspect
    the residual breakdown.
    """

    def __init__(self, message, equilibrium=None, certificate=None):
        super().__init__(message)
        self.equilibrium = equilibrium
        self.certificate = certificate
