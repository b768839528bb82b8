"""Exception and warning types shared by the fracsub modules."""


class ParameterError(ValueError):
    """Argument outside the admissible domain."""


class DiracLimit(ArithmeticError):
    """The requested density degenerates to a Dirac delta.

    Raised instead of returning a huge finite spike, e.g. for the stable
    density with alpha=1, theta=+-1 or the directing density with beta=1.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class ConvergenceError(ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class CensoredObservation(LookupError):
    """Observation time lies beyond the simulated horizon of a path."""


class AccuracyWarning(UserWarning):
    """Result returned but with degraded accuracy."""
