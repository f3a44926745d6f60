"""Exception hierarchy. All errors derive from :class:`TwistorError` (a ``ValueError``)."""


class TwistorError(ValueError):
    pass


class InvalidMapError(TwistorError):
    """Fractional map with (numerically) vanishing determinant."""


class InvalidFiberError(TwistorError):
    """Operation needs ``t`` away from the special fibers ``0`` and ``inf``."""


class OnDiagonalError(TwistorError):
    """Point lies on the fiberwise diagonal; only K-lines pass through it."""


class OnQError(TwistorError):
    """Point or direction lies in the divisor Q (or Q+)."""


class DomainError(TwistorError):
    """Argument outside the stratum an operation is defined on."""


class ChartError(TwistorError):
    pass


class NumericalFailureError(TwistorError):
    """Inversion did not reproduce its input within tolerance."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
