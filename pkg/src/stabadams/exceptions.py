"""Exception types raised across the package."""


class StabAdamsError(Exception):
    """Base class for all package errors."""


class PoleError(StabAdamsError, ZeroDivisionError):
    """sigma(zeta) vanished numerically; zeta is (close to) a root of sigma."""


class DegenerateError(StabAdamsError, ValueError):
    """The characteristic polynomial lost its leading coefficient."""


class OrderViolation(StabAdamsError, ValueError):
    """Coefficients do not satisfy the order conditions an operation needs."""


class NotConverged(StabAdamsError):
    """No multi-start attempt produced a feasible KKT point.

    Attributes
    ----------
    k, p : int
        Step count and order of the requested method.
    attempts : int
        Number of starting points tried.
    best_residual : float
        Smallest constraint residual reached by any attempt (inf if every
        attempt broke down).
    """

    def __init__(self, k, p, attempts, best_residual=float("inf")):
        self.k = k
        self.p = p
        self.attempts = attempts
        self.best_residual = best_residual
        super().__init__(
            f"NOT CONVERGED: (k, p) = ({k}, {p}) after {attempts} attempts "
            f"(best constraint residual {best_residual:.3g})"
        )


class ReferenceUnavailable(StabAdamsError):
    """The problem has no reference-solution provider."""
