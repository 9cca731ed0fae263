"""Exception types raised across the package."""


class MaxClassError(Exception):
    """Base class for all package errors."""


class ContractError(MaxClassError, ValueError):
    """An argument violated an operation's stated precondition."""


class SingularityError(MaxClassError, ArithmeticError):
    """A Weyl-Jacobian factor vanishes, so a derivative is undefined.

    ``root_index`` is the position of the offending root in the fixed
    positive-root ordering.
    """

    def __init__(self, message, root_index):
        super().__init__(message)
        self.root_index = root_index


class RootIsolationError(MaxClassError):
    """Fewer isolated real roots in [-1, 1] than the polynomial degree."""

    def __init__(self, message, intervals):
        super().__init__(message)
        self.intervals = intervals


class CertificateError(MaxClassError):
    """A closed-form answer failed one of its internal consistency checks."""

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class OptimizerFailure(MaxClassError):
    """No multistart run produced a finite, converged log-volume."""


class IntegrationError(MaxClassError):
    """The oscillator integrator could not reach the end of its window."""

    def __init__(self, message, x_reached):
        super().__init__(message)
        self.x_reached = x_reached
