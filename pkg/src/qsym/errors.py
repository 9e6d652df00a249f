"""Exception types raised across the package.

Validation failures subclass :class:`ValidationError` (itself a ValueError)
so that callers can catch "the input was malformed" in one clause while the
analysis routines signal their own, more specific conditions.
"""


class QsymError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(QsymError, ValueError):
    """Input data or parameters failed validation."""


# -- space construction -------------------------------------------------

class DuplicateLabel(ValidationError):
    pass


class NonSymmetric(ValidationError):
    """Asymmetry of the distance matrix exceeds the tolerance."""


class NegativeDistance(ValidationError):
    pass


class ZeroOffDiagonal(ValidationError):
    """Two distinct points sit at distance <= 0."""


class NonzeroDiagonal(ValidationError):
    """A diagonal entry is positive beyond the tolerance."""


class ScalerNotMonotone(ValidationError):
    """A distance scaler is not strictly increasing on the space's spectrum."""


class ScalerOriginNonzero(ValidationError):
    """A distance scaler does not fix zero."""


class BadParams(ValidationError):
    """Generator parameters are out of range or incomplete."""


# -- point maps ---------------------------------------------------------

class MapValidationError(ValidationError):
    pass


class UnassignedPoint(MapValidationError):
    pass


class UnknownTarget(MapValidationError):
    pass


class NotBijective(MapValidationError):
    pass


# -- triangle functions -------------------------------------------------

class GaugeInvalid(ValidationError):
    """A custom two-variable gauge failed its probe-grid validation."""


class NotInvertible(QsymError):
    """A gauge diagonal or modulus is not strictly increasing, so it
    cannot be inverted."""


class NoBracket(QsymError):
    """Bracket doubling never reached the target value."""


# -- quasisymmetry ------------------------------------------------------

class UnboundedEnvelope(QsymError):
    """No finite control function can verify the map: some image ratio has a
    zero denominator with a nonzero numerator.  ``witness`` holds the
    offending (x, a, b) index triple."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotQuasisymmetric(QsymError):
    """A precondition required the map to verify against the supplied
    modulus, and it does not."""


class SandwichOrderViolated(ValidationError):
    pass


class SubmultiplicativityViolated(ValidationError):
    pass


# -- structure transfer -------------------------------------------------

class PreconditionFailed(QsymError):
    """An end-to-end verification was invoked on inputs that do not satisfy
    the theorem's hypotheses; the message names the failing one."""


class Unbounded(QsymError):
    """A supremum diverged during a coefficient search."""


# -- betweenness --------------------------------------------------------

class GeneratorEndpointViolation(ValidationError):
    pass


class GeneratorNotIncreasing(ValidationError):
    pass


# -- weak similarity ----------------------------------------------------

class TooLarge(QsymError):
    """The brute-force search was asked to enumerate too many permutations."""


class NotAntisymmetric(ValidationError):
    pass


class NotHomeomorphism(ValidationError):
    pass


class NotAContinuation(ValidationError):
    pass


class NotSubmultiplicative(ValidationError):
    pass


# -- file formats -------------------------------------------------------

class ParseError(QsymError):
    """A space, map, or envelope file could not be parsed; carries the path
    and, when available, the line number."""

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc = f"{path}: "
            if line is not None:
                loc = f"{path}:{line}: "
        super().__init__(loc + message)
        self.path = path
        self.line = line
