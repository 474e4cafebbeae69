"""Exception hierarchy shared by all modules."""


class GwimmError(Exception):
    """Base class for every error raised by this package."""


class ModelError(GwimmError, ValueError):
    """The offspring/immigration pair violates a hard model assumption."""


class NegativeCoefficient(ModelError):
    pass


class NotNormalized(ModelError):
    pass


class SubcriticalOrCritical(ModelError):
    pass


class NotSchroder(ModelError):
    pass


class NoImmigrationGap(ModelError):
    pass


class EscapeError(GwimmError, ArithmeticError):
    """An iterate left the escape radius."""


class Diverged(EscapeError):
    """Poincare-type iteration escaped: the argument is outside the admissible sector."""


class NotInBasin(EscapeError):
    """Iterates failed to contract to the attracting fixed point 0."""


class CompositionNeedsZeroConstant(GwimmError, ValueError):
    pass


class DivisionByZeroConstant(GwimmError, ZeroDivisionError):
    pass


class NonPositiveX(GwimmError, ValueError):
    pass


class OutOfRange(GwimmError, ValueError):
    pass


class InsufficientCoverage(GwimmError, ValueError):
    pass


class HypothesisWarning(UserWarning):
    """A hypothesis behind the tail expansion fails; results are computed anyway."""
