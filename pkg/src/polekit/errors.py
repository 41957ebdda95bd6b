"""Exception and warning hierarchy shared by all polekit modules.

Two branches hang off :class:`WorkbenchError`:

* :class:`DomainError` (also a ``ValueError``) — the request itself is
  outside the validated domain of an operation (too-deep poles, branch
  cuts, unsupported kinematic windows, mismatched grids, ...).
* :class:`ConvergenceError` (also a ``RuntimeError``) — the request is
  legitimate but a numerical procedure could not meet its tolerance.

Warnings are ordinary ``UserWarning`` subclasses so they can be promoted
to errors with the standard ``warnings`` machinery when callers want
strictness.
"""

from __future__ import annotations

__all__ = [
    "WorkbenchError",
    "DomainError",
    "PoleDepthExceeded",
    "EvalAtZeroWithPoles",
    "BranchCutCrossing",
    "DomainUnsupported",
    "DenominatorVanishes",
    "GridMismatch",
    "ConvergenceError",
    "QuadratureNotConverged",
    "StepCountInsufficient",
    "AliasingWarning",
    "LandauPoleWarning",
    "BoundaryDecayWarning",
]


class WorkbenchError(Exception):
    """Base class for every error raised by polekit."""


class DomainError(WorkbenchError, ValueError):
    """A request lies outside the validated domain of an operation."""


class PoleDepthExceeded(DomainError):
    """A series product would create poles deeper than order 4."""


class EvalAtZeroWithPoles(DomainError):
    """A series with poles was evaluated at epsilon = 0."""


class BranchCutCrossing(DomainError):
    """A quadrature path would cross the two-particle branch cut."""


class DomainUnsupported(DomainError):
    """The requested kinematic point is in an unsupported window."""


class DenominatorVanishes(DomainError):
    """A finite renormalization denominator is (numerically) zero."""


class GridMismatch(DomainError):
    """Two spectral objects live on different grids."""


class ConvergenceError(WorkbenchError, RuntimeError):
    """A numerical procedure failed to meet its tolerance."""


class QuadratureNotConverged(ConvergenceError):
    """Adaptive quadrature exhausted its budget above tolerance."""


class StepCountInsufficient(ConvergenceError):
    """Doubling the ODE step count moved the endpoint too much."""


class AliasingWarning(UserWarning):
    """An oscillatory phase is under-resolved on the current grid."""


class LandauPoleWarning(UserWarning):
    """A coupling trajectory hit the Landau-pole guard and was truncated."""


class BoundaryDecayWarning(UserWarning):
    """A spectral kernel does not decay to < 1e-6 of peak at the grid edge."""
