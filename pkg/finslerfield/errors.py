class FinslerFieldError(ValueError):
    """Base class of every error raised by finslerfield"""


class InadmissibleDirection(FinslerFieldError):
    pass


class ZeroDirection(FinslerFieldError):
    pass


class NonpositiveKappa(FinslerFieldError):
    pass


class BoundaryPoint(FinslerFieldError):
    pass


class SpacelikeGradient(FinslerFieldError):
    pass


class NotPositiveDefinite(FinslerFieldError):
    pass


class NonpositiveQ0(FinslerFieldError):
    pass


class InfiniteVolume(FinslerFieldError):
    pass


class NegativeBase(FinslerFieldError):
    pass


class GridTooSmall(FinslerFieldError):
    pass


class NonpositiveRadius(FinslerFieldError):
    pass


class SingularDenominator(FinslerFieldError, ArithmeticError):
    pass


class OriginSingularity(FinslerFieldError, ArithmeticError):
    pass


class ToleranceNotMet(FinslerFieldError):
    pass


class OutOfRange(FinslerFieldError):
    pass


class DerivativeUnavailable(FinslerFieldError):
    pass


class SingularMetric(FinslerFieldError):
    pass


class ZeroLambda(FinslerFieldError):
    pass


class LeftDomain(FinslerFieldError):
    pass


class TooFewSamples(FinslerFieldError):
    pass
