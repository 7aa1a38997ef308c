"""Exception hierarchy."""


class GicError(Exception):
    """Base class for all package errors."""


class ChannelError(GicError, ValueError):
    """Malformed channel instance or dimension mismatch."""


class ConfigError(GicError, ValueError):
    """Unreadable or inconsistent configuration document."""


class EmptyEpsilonSet(GicError):
    """No vertex survives the epsilon-strip filter."""


class InfeasibleMinRates(GicError):
    """The minimum-rate tuple itself is not achievable."""


class OriginInfeasible(InfeasibleMinRates):
    """Bisection origin is infeasible (raised by the boundary oracle)."""


class SpectralRadiusAtLeastOne(GicError, ValueError):
    """The normalized gain matrix has spectral radius >= 1."""


class NonPositiveEigenvector(GicError):
    """Dominant eigenvector of a coupling matrix is not strictly positive."""


class NoAdmissibleSubproblem(GicError):
    """No SINR-balancing sub-problem satisfies every power budget."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class SolverFailure(GicError):
    """An inner numerical solve missed its accuracy target."""
