"""Geometry of zero sets: rescaling, the limit curves, Hausdorff distances,
translation tests and the comparison with the lattice near the real axis.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError
from .zerofinder import ZeroSet

__all__ = [
    "SINGULAR",
    "CLIP_SIGMA",
    "CurveFamily",
    "HausdorffReport",
    "PeriodReport",
    "rescale_zeros",
    "curve_modulus",
    "curve_sigma",
    "curve_sigma_array",
    "sample_curves",
    "hausdorff_distance",
    "directed_hausdorff",
    "windowed_hausdorff",
    "almost_period_test",
    "lattice_points",
    "lattice_compare",
    "curves_to_csv",
]

SINGULAR = -math.inf
CLIP_SIGMA = -1.0
# |mu_j| vanishes quadratically, so this is |t - t_singular| below about 1e-10
_SINGULAR_MOD = 1e-20


def rescale_zeros(zs: ZeroSet, b: float) -> np.ndarray:
    """``sigma + i t -> sigma b + i e**-b t``."""
    if not math.isclose(zs.b, b, rel_tol=1e-12, abs_tol=0.0):
        raise DomainError(f"zero set was computed for b={zs.b}, not b={b}")
    s = np.asarray(zs.s, dtype=complex)
    return s.real * b + 1j * s.imag * math.exp(-b)


def curve_modulus(j: int, t) -> np.ndarray:
    """``|mu_j(exp(i t))|`` for ``j`` in 1..4 (principal branch of the square root)."""
    if j not in (1, 2, 3, 4):
        raise DomainError(f"curve index must be 1..4, got {j!r}")
    z = np.exp(1j * np.asarray(t, dtype=float))
    if j == 1:
        mu = (z - 1) ** 2
    elif j == 2:
        mu = (z + 1) ** 2
    else:
        r = np.sqrt(4 - 3 * z * z)
        mu = 1 - z * z / 2 + (1 if j == 3 else -1) * z * r / 2
    return np.abs(mu)


def curve_sigma(j: int, t: float) -> float:
    """``sigma_j(t) = log|mu_j(e^{it})| / 2``; :data:`SINGULAR` where the modulus vanishes."""
    m = float(curve_modulus(j, t))
    if m < _SINGULAR_MOD:
        return SINGULAR
    return 0.5 * math.log(m)


def curve_sigma_array(j: int, t) -> np.ndarray:
    m = curve_modulus(j, t)
    with np.errstate(divide="ignore"):
        return np.where(m < _SINGULAR_MOD, SINGULAR, 0.5 * np.log(np.maximum(m, 0.0)))


@dataclass(frozen=True)
class CurveFamily:
    """The four limit curves sampled on a uniform grid in ``t``.

    ``sigma`` has shape ``(4, len(t))``; values below :data:`CLIP_SIGMA`
    (including the singular points) are clipped to it.
    """

    t: np.ndarray
    sigma: np.ndarray
    dt: float

    def points(self, window: Sequence[float] | None = None) -> np.ndarray:
        pts = (self.sigma + 1j * self.t[None, :]).ravel()
        return pts if window is None else pts[_in_window(pts, window)]

    def max_slope(self) -> float:
        """Largest ``|d sigma / dt|`` between consecutive samples, ignoring clipped samples."""
        ok = self.sigma[:, 1:] > CLIP_SIGMA
        ok &= self.sigma[:, :-1] > CLIP_SIGMA
        slope = np.abs(np.diff(self.sigma, axis=1)) / self.dt
        return float(slope[ok].max()) if ok.any() else 0.0

    def discretisation_error(self) -> float:
        """Bound on the distance from a curve point to the nearest sample."""
        return 0.5 * self.dt * math.hypot(1.0, self.max_slope())


def sample_curves(t_min: float, t_max: float, dt: float = 1e-3) -> CurveFamily:
    if not (t_max > t_min and dt > 0):
        raise DomainError("need t_max > t_min and dt > 0")
    if dt > 1e-3:
        raise DomainError("curve sampling step must be at most 1e-3")
    n = int(math.ceil((t_max - t_min) / dt)) + 1
    t = t_min + dt * np.arange(n)
    sig = np.vstack([curve_sigma_array(j, t) for j in (1, 2, 3, 4)])
    return CurveFamily(t=t, sigma=np.maximum(sig, CLIP_SIGMA), dt=dt)


# -- Hausdorff ------------------------------------------------------------------

def _xy(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex).ravel()
    return np.c_[a.real, a.imag]


def directed_hausdorff(A, B) -> float:
    """``sup_{a in A} inf_{b in B} |a - b|``."""
    A, B = _xy(A), _xy(B)
    if not len(A) or not len(B):
        raise DomainError("Hausdorff distance needs nonempty sets")
    d, _ = cKDTree(B).query(A, k=1)
    return float(d.max())


def hausdorff_distance(A, B) -> float:
    """Exact Hausdorff distance between two finite sets of complex numbers."""
    return max(directed_hausdorff(A, B), directed_hausdorff(B, A))


def _in_window(p: np.ndarray, window: Sequence[float]) -> np.ndarray:
    a, b, c, d = window
    return (p.real >= a) & (p.real <= b) & (p.imag >= c) & (p.imag <= d)


@dataclass(frozen=True)
class HausdorffReport:
    distance: float
    forward: float  # zeros -> curves
    backward: float  # curves -> zeros
    discretisation: float
    n_a: int
    n_b: int


def windowed_hausdorff(A, B, window: Sequence[float], margin: float = 0.1,
                       discretisation: float = 0.0) -> HausdorffReport:
    """Hausdorff distance restricted to ``window`` with top and bottom margins.

    Points of either set are tested only inside the window shrunk by
    ``margin`` in ``Im``; their partners may lie anywhere in the other set.
    """
    a, b, c, d = window
    inner = (a, b, c + margin, d - margin)
    A = np.asarray(A, dtype=complex).ravel()
    B = np.asarray(B, dtype=complex).ravel()
    Ai, Bi = A[_in_window(A, inner)], B[_in_window(B, inner)]
    if not len(Ai) or not len(Bi):
        raise DomainError("a set has no points in the window")
    fw = directed_hausdorff(Ai, B)
    bw = directed_hausdorff(Bi, A)
    return HausdorffReport(max(fw, bw), fw, bw, discretisation, len(Ai), len(Bi))


# -- translations -----------------------------------------------------------

@dataclass(frozen=True)
class PeriodReport:
    tau: float
    max_distance: float
    unmatched: int
    matched: int
    passed: bool


def almost_period_test(zs: ZeroSet, tau_im: float, eps: float, t0: float | None = None,
                       height: float | None = None, edge_margin: float = 0.0) -> PeriodReport:
    """Greedy matching of the zeros in ``[t0, t0+H]`` with those in ``[t0+tau, t0+tau+H]``.

    Zeros within ``edge_margin`` of either window edge may stay unmatched
    without failing the test (their partners can fall outside the window).
    """
    s = np.asarray(zs.s, dtype=complex)
    lo, hi = zs.rect[2], zs.rect[3]
    t0 = lo if t0 is None else t0
    height = (hi - lo - abs(tau_im)) if height is None else height
    if height <= 0 or t0 < lo or t0 + abs(tau_im) + height > hi + 1e-12:
        raise DomainError("zero set does not cover both windows")
    first = s[(s.imag >= t0) & (s.imag <= t0 + height)]
    second = s[(s.imag >= t0 + tau_im) & (s.imag <= t0 + tau_im + height)] - 1j * tau_im
    if not len(first) and not len(second):
        return PeriodReport(tau_im, 0.0, 0, 0, True)
    pairs = []
    if len(first) and len(second):
        dist = np.abs(first[:, None] - second[None, :])
        order = np.argsort(dist, axis=None, kind="stable")
        used_a = np.zeros(len(first), bool)
        used_b = np.zeros(len(second), bool)
        for flat in order:
            i, j = divmod(int(flat), len(second))
            if used_a[i] or used_b[j]:
                continue
            if dist[i, j] > eps:
                break
            used_a[i] = used_b[j] = True
            pairs.append(dist[i, j])
    else:
        used_a = np.zeros(len(first), bool)
        used_b = np.zeros(len(second), bool)

    def interior(p):
        return (p.imag > t0 + edge_margin) & (p.imag < t0 + height - edge_margin)

    unmatched = int((~used_a & interior(first)).sum() + (~used_b & interior(second)).sum())
    maxd = float(max(pairs)) if pairs else (0.0 if not unmatched else math.inf)
    return PeriodReport(tau_im, maxd, unmatched, len(pairs), unmatched == 0)


# -- lattice ------------------------------------------------------------------

def lattice_points(height: float) -> np.ndarray:
    """Points of ``(ln 2 + i pi Z) u i pi Z`` with ``|Im| <= height``."""
    k = np.arange(-int(height // math.pi), int(height // math.pi) + 1)
    return np.concatenate([1j * math.pi * k, math.log(2) + 1j * math.pi * k])


def lattice_compare(zs: ZeroSet, b: float, kappa_height: float, delta: float | None = None,
                    margin: float = 0.0) -> float:
    """Hausdorff distance between ``b * (zeros with |Re| <= delta, |Im| <= kappa_height)`` and the lattice.

    ``delta`` defaults to the largest real zero in the set.
    """
    if not math.isclose(zs.b, b, rel_tol=1e-12):
        raise DomainError(f"zero set was computed for b={zs.b}, not b={b}")
    s = np.asarray(zs.s, dtype=complex)
    if zs.rect[2] > -kappa_height or zs.rect[3] < kappa_height:
        raise DomainError("zero set does not cover the window")
    if delta is None:
        real = s[np.abs(s.imag) == 0]
        if not len(real):
            raise DomainError("no real zero in the set; pass delta")
        delta = float(real.real.max())
    sel = s[(np.abs(s.real) <= delta) & (np.abs(s.imag) <= kappa_height)] * b
    L = lattice_points(kappa_height * b)
    if margin > 0:
        h = kappa_height * b
        return windowed_hausdorff(sel, L, (-math.inf, math.inf, -h, h), margin).distance
    return hausdorff_distance(sel, L)


# -- export ---------------------------------------------------------------------

def curves_to_csv(curves: CurveFamily) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "sigma1", "sigma2", "sigma3", "sigma4"])
    for k, t in enumerate(curves.t):
        w.writerow([f"{t:.17g}"] + [f"{curves.sigma[j, k]:.17g}" for j in range(4)])
    return buf.getvalue()
