"""Exception hierarchy shared by all raux modules."""


class RauxError(Exception):
    """Base class for every error raised by raux."""


class InvalidArgument(RauxError, ValueError):
    pass


class DomainError(RauxError, ValueError):
    pass


class PoleError(DomainError):
    pass


class NonFiniteError(RauxError, ArithmeticError):
    """An intermediate overflowed, underflowed to an unusable value, or became NaN."""


class ConvergenceError(RauxError):
    pass


class QuadratureError(RauxError):
    pass


class TruncationError(QuadratureError):
    """The integration window is too short: the integrand is not negligible at an endpoint."""


class PrecisionExhausted(RauxError):
    pass


class BranchError(RauxError):
    pass


class SeedMismatch(ConvergenceError):
    pass


class StageError(RauxError):
    """Failure inside the zero pipeline, tagged with the stage that failed."""

    def __init__(self, stage, n, cause):
        self.stage = stage
        self.n = n
        self.cause = cause
        super().__init__(f"n={n}: stage '{stage}' failed: {cause}")
