"""Exception types shared across the toolkit."""


class DecayCertError(Exception):
    """Base class for all toolkit errors."""


class NotSectorial(DecayCertError):
    """The stiffness matrix has no positive-definite Hermitian part."""


class NotAccretiveDamping(DecayCertError):
    """The damping matrix is not strictly accretive (beta <= 0)."""


class InvalidParams(DecayCertError, ValueError):
    """A parameter is outside its admissible range."""


class AssumptionCViolated(DecayCertError):
    """The strengthened damping coercivity (delta > 0) does not hold."""


class NotPositiveDefinite(DecayCertError):
    """A matrix required to be positive definite failed Cholesky."""


class VerificationFailed(DecayCertError):
    """An a-posteriori check of a certificate failed.

    Carries the violating value in ``args[1]`` when available.
    """


class NoValidCertificate(DecayCertError):
    """Every searched parameter tuple produced an invalid certificate."""


class EigensolverFailure(DecayCertError):
    """The dense eigensolver did not converge."""


class SingularPencil(DecayCertError):
    """The quadratic matrix polynomial is numerically singular at the
    requested shift."""


class InsufficientData(DecayCertError):
    """Not enough usable samples for a fit."""


class ParseError(DecayCertError):
    """Malformed input file. ``line`` is the 1-based offending line."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionMismatch(DecayCertError):
    """Two matrices that must share a shape do not."""
