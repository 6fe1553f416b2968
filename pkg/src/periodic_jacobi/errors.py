"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the region where the quantity is defined."""


class ConsistencyError(RuntimeError):
    """An internal identity failed; this points at a bug, not at user input."""


class TurningPointError(ConsistencyError):
    """The turning-point solver found fewer than 2N roots of g_N^2 = 1."""


class QuadratureError(RuntimeError):
    """Double-exponential quadrature did not settle between refinement levels."""


class ExtrapolationError(RuntimeError):
    """Richardson extrapolation saw a non-contracting sequence."""
