"""Zeros of Selberg zeta functions for symmetric three-funnelled hyperbolic surfaces."""

from .errors import (
    AuditError,
    BoundNotProvenError,
    DomainError,
    FunnelZetaError,
    NoRealZeroError,
    NumericalError,
    ResourceError,
    StateError,
)
from .hyperbolic import SurfaceParams, geodesic_length, make_surface
from .symdyn import enumerate_fixed_points
from .zetacore import CoefficientTable, evaluate_Zn, length_spectrum

__version__ = "0.1.0"
