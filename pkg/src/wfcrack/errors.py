"""Exception types shared across the package."""


class InputDomainError(ValueError):
    """Raised when an argument lies outside the domain of a formula."""


class NumericalError(RuntimeError):
    """Raised when a numerical procedure fails to reach its tolerance.

    Parameters
    ----------
    message : str
        Human-readable description.
    estimate : complex, optional
        Best value obtained before giving up.
    error : float, optional
        Achieved error estimate for ``estimate``.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
