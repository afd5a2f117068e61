"""Exception hierarchy shared by all a1lab modules."""


class A1LabError(Exception):
    """Base class for every error raised by this package."""


class NotPrime(A1LabError, ValueError):
    """The requested characteristic is not a prime number."""


class Overflow(A1LabError, ValueError):
    """Field parameters outside the supported desk-scale range."""


class MixedFields(A1LabError, ValueError):
    """Operands belong to different field instances."""


class DivisionByZero(A1LabError, ZeroDivisionError):
    """Inversion of zero, or division by the zero polynomial."""


class NotEnoughElements(A1LabError, ValueError):
    """A distinct sample was requested that exceeds the field size."""


class ZeroPolynomial(A1LabError, ValueError):
    """The zero polynomial was passed where a nonzero one is required."""


class ArityMismatch(A1LabError, ValueError):
    """Multivariate operands disagree on the number of variables."""


class FieldTooLarge(A1LabError, ValueError):
    """Exhaustive root search over a field beyond the scan bound."""


class DegenerateDegrees(A1LabError, ValueError):
    """Resultant of polynomials that are constant in the eliminated variable."""


class BadNormalization(A1LabError, ValueError):
    """Boundary form coefficients violate the required end normalization."""


class BadCongruence(A1LabError, ValueError):
    """Multiplicity incompatible with the contact degree modulo p."""


class ZeroScale(A1LabError, ValueError):
    """Reparameterization with scale factor zero."""


class IdentityFailure(A1LabError, AssertionError):
    """An exact symbolic identity failed; carries the residual or a label."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PointOnBoundary(A1LabError, ValueError):
    """A point expected in the interior lies on the boundary curve."""


class NotEnoughNodes(A1LabError, ValueError):
    """Interpolation needs more distinct parameter nodes than the field has."""


class ConstantMap(A1LabError, ValueError):
    """Implicitization of a constant parameterization."""


class ClassificationMismatch(A1LabError, AssertionError):
    """A singular-locus classification check failed."""


class CertificateFailure(A1LabError, AssertionError):
    """A divisibility or smoothness certificate failed; names the offender."""


class ConeMismatch(A1LabError, AssertionError):
    """Tangent cone disagrees with its closed form."""


class GenericityExhausted(A1LabError, RuntimeError):
    """Rejection sampling ran out of retries; reports the failing condition."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})
