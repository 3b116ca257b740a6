"""Exception types shared across the package.

The CLI maps these onto exit codes: domain-type errors (bad mathematical
input) exit 1, usage/configuration problems exit 2.
"""


class WavebreakError(Exception):
    """Base class for all package errors."""


class DomainError(WavebreakError, ValueError):
    """Input outside the mathematical domain of an operation."""


class GeometryError(DomainError):
    """Profile geometry infeasible (mean-zero correction leaves [a, b])."""


class SingularityError(DomainError):
    """Evaluation requested at a singular point of an unbounded kernel."""


class RangeError(DomainError):
    """Wavenumber outside the range covered by a tabulated phase velocity."""


class AccuracyError(WavebreakError, RuntimeError):
    """Quadrature failed to reach the requested tolerance.

    Carries the achieved tolerance in ``achieved``.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ConfigurationError(WavebreakError, ValueError):
    """Inconsistent solver configuration or malformed config input."""


class IntegratorFailure(WavebreakError, RuntimeError):
    """Adaptive step size underflowed before any terminal event.

    Carries the partial trajectory in ``trajectory``.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory
