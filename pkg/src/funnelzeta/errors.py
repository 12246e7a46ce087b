"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class FunnelZetaError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FunnelZetaError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalError(FunnelZetaError, ArithmeticError):
    """A computation degenerated (non-hyperbolic product, failed audit, ...)."""


class ResourceError(FunnelZetaError):
    """A request exceeds a configured size ceiling."""


class StateError(FunnelZetaError):
    """An object is incomplete for the requested operation."""


class BoundNotProvenError(FunnelZetaError):
    """Parameters fall outside the region where the truncation bound is proven."""


class NoRealZeroError(NumericalError):
    """No sign change of the partial sum was found on (0, 1)."""


class AuditError(NumericalError):
    """The argument-principle audit could not be completed."""
