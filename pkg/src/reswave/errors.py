"""Exception types shared across the solvers and the experiment harness."""


class ReswaveError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(ReswaveError):
    """Invalid or malformed experiment configuration."""


class DegenerateInputError(ReswaveError, ValueError):
    """An operation received input outside its admissible set.

    Raised e.g. when a singular Fourier multiplier (1/ik at k=0) is applied
    to a field with nonzero mean, or when a resonance denominator vanishes.
    """


class StepFailureError(ReswaveError):
    """An implicit time step failed to converge.

    Attributes
    ----------
    iterations : int
        Number of fixed-point iterations performed before giving up.
    residual : float
        Last measured update size.
    """

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class SolverDivergedError(ReswaveError):
    """A time integration blew up (NaN or amplitude runaway).

    Attributes
    ----------
    time : float
        Simulation time at which the failure was detected.
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class RootFailureError(ReswaveError):
    """Newton iteration for an implicit profile equation did not converge."""

    def __init__(self, message, xi=None, residual=None):
        super().__init__(message)
        self.xi = xi
        self.residual = residual
