"""Geometry of the three reflection geodesics and exact closed-geodesic lengths.

The surface is modelled in the upper half-plane.  The reflection geodesics
``beta_j`` are half-circles with Euclidean centre ``c_j`` and radius
``eps_j``; the reflection in ``beta_j`` acts on the boundary line by
``x -> eps_j**2 / (x - c_j) + c_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, NumericalError

__all__ = [
    "SurfaceParams",
    "ScaledMatrix2",
    "make_surface",
    "hexagon_side",
    "geodesic_distance",
    "geodesic_pair_distance",
    "reflection_matrix",
    "word_matrix",
    "geodesic_length",
    "log_acosh",
]

DEFAULT_KAPPA = 1.05
_LOG_ACOSH_SWITCH = 1.0e4


@dataclass(frozen=True)
class SurfaceParams:
    """Geometric constants of the symmetric three-funnelled surface.

    ``b`` is half the length of each boundary geodesic, which is also the
    distance between any two reflection geodesics.
    """

    b: float
    theta: float
    eps: tuple[float, float, float]
    c: tuple[float, float, float]
    kappa: float = DEFAULT_KAPPA

    def endpoints(self, j: int) -> tuple[float, float]:
        """Boundary endpoints of ``beta_j`` (``j`` in 1..3), ascending."""
        e, c = self.eps[j - 1], self.c[j - 1]
        return (c - e, c + e)

    def disks_disjoint(self) -> bool:
        iv = sorted(self.endpoints(j) for j in (1, 2, 3))
        return all(iv[k][1] < iv[k + 1][0] for k in range(2))


def _half_plane_endpoint(angle: float) -> float:
    # sin(a)/(1+cos(a)) == tan(a/2); reduce a/2 into (-pi/2, pi/2] first
    half = 0.5 * angle
    half -= math.pi * round(half / math.pi)
    return math.tan(half)


def make_surface(b: float, kappa: float = DEFAULT_KAPPA) -> SurfaceParams:
    """Build the reflection configuration whose geodesics are pairwise ``b`` apart.

    Two geodesics of the unit disk with endpoints ``exp(i(a +- theta))``
    whose centres are ``2*pi/3`` apart satisfy
    ``cosh d = 3 / (2 sin(theta)**2) - 1``, so distance ``b`` requires
    ``sin(theta) = sqrt(3) / (2 cosh(b/2))``.
    """
    if not (b > 0 and math.isfinite(b)):
        raise DomainError(f"b must be a positive finite real, got {b!r}")
    if not (1.0 < kappa < 2.0):
        raise DomainError(f"kappa must lie in (1, 2), got {kappa!r}")
    theta = math.asin(math.sqrt(3.0) / (2.0 * math.cosh(0.5 * b)))
    eps, cen = [], []
    for j in (1, 2, 3):
        a = 2.0 * math.pi * j / 3.0
        hi = _half_plane_endpoint(a + theta)
        lo = _half_plane_endpoint(a - theta)
        eps.append(0.5 * (hi - lo))
        cen.append(0.5 * (hi + lo))
    params = SurfaceParams(b=float(b), theta=theta, eps=tuple(eps), c=tuple(cen), kappa=float(kappa))
    if min(params.eps) <= 0 or not params.disks_disjoint():
        raise NumericalError(f"degenerate reflection configuration for b={b}")
    return params


def hexagon_side(b: float) -> float:
    """Length of the short sides of the right-angled hexagon with long sides ``b``.

    Solves ``cosh(e) sinh(b)**2 = cosh(b) + cosh(b)**2``.  Written as
    ``e = 2 asinh(1 / (2 sinh(b/2)))`` to keep full precision for large ``b``.
    """
    if not b > 0:
        raise DomainError(f"b must be positive, got {b!r}")
    sh = math.sinh(0.5 * b)
    if sh == 0.0:
        raise DomainError("sinh(b) vanishes")
    return 2.0 * math.asinh(0.5 / sh)


def geodesic_distance(z1: float, w1: float, w2: float, z2: float) -> float:
    """Distance between the nested geodesics ``(z1, z2)`` and ``(w1, w2)``.

    The points must satisfy ``z1 < w1 < w2 < z2``.  The cross ratio
    ``(z1-w2)(w1-z2) / ((z1-w1)(w2-z2))`` then exceeds one and equals
    ``coth(d/2)**2``.
    """
    if not (z1 < w1 < w2 < z2):
        raise DomainError("boundary points must satisfy z1 < w1 < w2 < z2")
    cr = (z1 - w2) * (w1 - z2) / ((z1 - w1) * (w2 - z2))
    if not (cr > 1.0 and math.isfinite(cr)):
        raise DomainError(f"cross ratio {cr!r} outside (1, inf)")
    return 2.0 * math.atanh(1.0 / math.sqrt(cr))


def geodesic_pair_distance(g1: tuple[float, float], g2: tuple[float, float]) -> float:
    """Distance between two disjoint geodesics given by endpoint pairs on the real line."""
    a, b = sorted(g1)
    c, d = sorted(g2)
    if b < c:
        # side by side: relabel cyclically as b < c < d < a (a sits past infinity)
        pts = (b, c, d, a)
    elif d < a:
        pts = (d, a, b, c)
    elif a < c and d < b:
        pts = (a, c, d, b)
    elif c < a and b < d:
        pts = (c, a, b, d)
    else:
        raise DomainError("geodesics intersect or share an endpoint")
    z1, w1, w2, z2 = pts
    cr = (z1 - w2) * (w1 - z2) / ((z1 - w1) * (w2 - z2))
    if not (cr > 1.0 and math.isfinite(cr)):
        raise DomainError(f"cross ratio {cr!r} outside (1, inf)")
    return 2.0 * math.atanh(1.0 / math.sqrt(cr))


@dataclass(frozen=True)
class ScaledMatrix2:
    """2x2 real matrix equal to ``exp(logscale) * [[a, b], [c, d]]``.

    The determinant is carried separately as ``detsign * exp(logabsdet)``
    because ``a*d - b*c`` of a long product cancels catastrophically.
    """

    a: float
    b: float
    c: float
    d: float
    logscale: float = 0.0
    logabsdet: float = 0.0
    detsign: int = 1

    @classmethod
    def identity(cls) -> "ScaledMatrix2":
        return cls(1.0, 0.0, 0.0, 1.0)

    def renormalized(self) -> "ScaledMatrix2":
        big = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if big == 0.0 or not math.isfinite(big):
            raise NumericalError("matrix product degenerated")
        _, e = math.frexp(big)  # big = f * 2**e with f in [1/2, 1)
        k = -e + 1  # rescale so the max entry lands in [1, 2)
        return ScaledMatrix2(
            math.ldexp(self.a, k), math.ldexp(self.b, k),
            math.ldexp(self.c, k), math.ldexp(self.d, k),
            self.logscale - k * math.log(2.0), self.logabsdet, self.detsign,
        )

    def __matmul__(self, o: "ScaledMatrix2") -> "ScaledMatrix2":
        return ScaledMatrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            self.logscale + o.logscale,
            self.logabsdet + o.logabsdet,
            self.detsign * o.detsign,
        ).renormalized()

    def log_abs_trace(self) -> float:
        tr = self.a + self.d
        if tr == 0.0:
            return -math.inf
        return math.log(abs(tr)) + self.logscale

    def max_abs_entry(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))


def reflection_matrix(j: int, params: SurfaceParams) -> ScaledMatrix2:
    """Matrix of ``x -> eps**2/(x - c) + c``; determinant ``-eps**2``.

    Stored divided by ``eps`` so the entries stay O(1/eps) rather than O(1)
    mixed with O(eps**2).
    """
    if j not in (1, 2, 3):
        raise DomainError(f"reflection index must be 1, 2 or 3, got {j!r}")
    e, c = params.eps[j - 1], params.c[j - 1]
    m = ScaledMatrix2(c / e, e - c * c / e, 1.0 / e, -c / e,
                      logscale=math.log(e), logabsdet=2.0 * math.log(e), detsign=-1)
    return m.renormalized()


def _check_word(word: Sequence[int]) -> None:
    n = len(word)
    if n == 0 or n % 2:
        raise DomainError(f"word must have positive even length, got {n}")
    for i in range(n):
        if word[i] not in (1, 2, 3):
            raise DomainError(f"symbol {word[i]!r} not in {{1,2,3}}")
        if word[i] == word[(i + 1) % n]:
            raise DomainError(f"word {tuple(word)} is not cyclically admissible")


def word_matrix(word: Iterable[int], params: SurfaceParams) -> ScaledMatrix2:
    refl = [reflection_matrix(j, params) for j in (1, 2, 3)]
    acc = ScaledMatrix2.identity()
    for j in word:
        acc = acc @ refl[j - 1]
    return acc


def log_acosh(log_x: float) -> float:
    """``acosh(x)`` given ``log(x)``, accurate for arguments far beyond float range."""
    if log_x < 0.0:
        raise NumericalError("acosh argument below 1")
    x = math.exp(log_x) if log_x < 700.0 else math.inf
    if x < _LOG_ACOSH_SWITCH:
        return math.acosh(max(x, 1.0))
    return log_x + math.log1p(math.sqrt(-math.expm1(-2.0 * log_x)))


def geodesic_length(word, params: SurfaceParams) -> float:
    """Length of the closed geodesic with the given cyclic cutting word.

    ``word`` is a symbol sequence or anything with a ``word`` attribute
    (an orbit record).  Uses ``l = 2 acosh(|tr P| / (2 sqrt(det P)))`` for the
    product ``P`` of the reflection matrices.
    """
    seq = tuple(getattr(word, "word", word))
    _check_word(seq)
    prod = word_matrix(seq, params)
    log_x = prod.log_abs_trace() - math.log(2.0) - 0.5 * prod.logabsdet
    if log_x < -1e-12:
        raise NumericalError(f"non-hyperbolic product for word {seq}")
    length = 2.0 * log_acosh(max(log_x, 0.0))
    if not length > 0.0:
        raise NumericalError(f"degenerate length for word {seq}")
    return length
