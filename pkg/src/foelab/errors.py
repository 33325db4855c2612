"""Exception types shared across the package."""


class FoelabError(Exception):
    """Base class for errors raised by this package."""


class GraphSpecError(FoelabError):
    """Malformed graph-spec text (carries a line number when known)."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class NonInvariantOperatorError(FoelabError):
    """Operator does not commute with the symmetry it was assumed to have."""


class NumericalError(FoelabError):
    """Numerical failure: ill-conditioning, non-simple zero mode, etc."""


class ReducibleMatrixError(NumericalError):
    """Matrix is reducible, so no Perron-Frobenius positivity claim is made."""
