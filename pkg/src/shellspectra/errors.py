"""Exception types raised across the package."""


class ShellSpectraError(Exception):
    """Base class of every error raised on purpose by this package."""


class InvalidParameterError(ValueError, ShellSpectraError):
    """A numerical parameter lies outside its admissible range."""


class InvalidFieldError(ValueError, ShellSpectraError):
    """The random field expansion cannot guarantee a positive modulus."""


class UnsupportedError(ValueError, ShellSpectraError):
    """The requested model/geometry/boundary combination is not implemented."""


class ConvergenceError(RuntimeError, ShellSpectraError):
    """An iterative method failed to meet its tolerance within the budget."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class FlaggedPointError(RuntimeError, ShellSpectraError):
    """A collocation point could not be aligned with the reference basis.

    This happens when the sign of the reference inner product is undefined
    or when the projection matrix is singular, both of which indicate that
    the assumed spectral gap does not hold at that point.
    """

    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = list(points)
