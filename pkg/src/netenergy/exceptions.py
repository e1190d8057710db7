"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line front end can map
failures onto its documented process exit status without a lookup table.
"""


class NetEnergyError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 3


class InvalidInputError(NetEnergyError, ValueError):
    """Malformed, non-finite or out-of-domain input."""

    exit_code = 2


class NotStableError(InvalidInputError):
    """A matrix required to be Hurwitz has an eigenvalue too close to or right of the axis."""


class StabilityMismatchError(InvalidInputError):
    """The requested Gramian does not exist for the spectrum of ``A``."""


class AxisEigenvalueError(InvalidInputError):
    """An eigenvalue lies within the axis tolerance of the imaginary axis."""


class NonProportionalDampingError(InvalidInputError):
    """Damping is not diagonalised by the undamped modes."""

    def __init__(self, message, offdiag_norm=None):
        super().__init__(message)
        self.offdiag_norm = offdiag_norm


class ZeroFrequencyError(InvalidInputError):
    """A rigid-body (zero frequency) mode makes the modal formulas undefined."""


class GridFormatError(InvalidInputError):
    """An edge-list file could not be parsed."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class NumericalFailureError(NetEnergyError, ArithmeticError):
    """A kernel returned a result that fails its own residual check."""

    exit_code = 3


class HorizonOverflowError(NumericalFailureError):
    """The matrix exponential over the horizon overflows double precision."""

    def __init__(self, message, max_horizon=None):
        super().__init__(message)
        self.max_horizon = max_horizon


class SingularGramianError(NetEnergyError, ArithmeticError):
    """A Gramian is numerically singular, so energy metrics are undefined."""

    exit_code = 4

    def __init__(self, message, eigenvalues=None, direction=None):
        super().__init__(message)
        self.eigenvalues = eigenvalues
        self.direction = direction


class UncontrollableError(SingularGramianError):
    """The pair (A, B) is (numerically) uncontrollable.

    ``direction`` holds the eigenvector of the Gramian belonging to its
    smallest eigenvalue, i.e. the state direction that is hardest to reach.
    """


class InfeasibleCoverageError(SingularGramianError):
    """Too few driver nodes to excite every mode."""
