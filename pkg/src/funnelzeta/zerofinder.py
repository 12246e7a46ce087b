"""Zeros of the partial sums ``Z_n`` in rectangles of the critical strip.

Newton's method is run from a grid of seeds with the exact derivative,
results are deduplicated, and completeness is audited with the argument
principle.  Slabs whose winding number disagrees with the Newton count are
re-seeded more densely and searched with deflation.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import AuditError, DomainError, NoRealZeroError
from .zetacore import CoefficientTable, ExpSumEvaluator

__all__ = [
    "ZeroSet",
    "WindingResult",
    "find_real_delta",
    "default_grid_step",
    "find_zeros_rect",
    "newton_polish",
    "winding_count",
    "winding_detail",
    "endpoint_set",
    "endpoint_zero_near",
    "zeros_to_csv",
    "zeros_from_csv",
    "thread_count",
]

THREADS_ENV = "FUNNELZETA_THREADS"
CHUNK = 4096  # fixed chunking keeps results independent of the worker count
MAX_ITER = 50
STEP_TOL = 1e-13
RESIDUAL_TOL = 1e-9
STRIP_SLACK = 0.02
AUDIT_SLAB = 25.0
DEDUP_RADIUS = 1e-5
CERT_RESIDUAL = 1e-4
CERT_RADIUS = 2e-5
MULT_RADIUS = 1e-3


def thread_count(threads: int | None = None) -> int:
    if threads:
        return max(1, int(threads))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


@dataclass(frozen=True)
class ZeroSet:
    """Zeros of ``Z_n`` found in ``rect = (sigma_min, sigma_max, t_min, t_max)``.

    ``audit`` is ``(winding_total, found_total)`` when an audit ran.
    """

    s: np.ndarray
    residual: np.ndarray
    iterations: np.ndarray
    rect: tuple[float, float, float, float]
    n_used: int
    b: float
    audit: tuple[int, int] | None = None
    multiplicity: np.ndarray | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.multiplicity is None:
            object.__setattr__(self, "multiplicity", np.ones(len(self.s), dtype=np.int64))

    @property
    def count(self) -> int:
        """Number of zeros counted with multiplicity."""
        return int(self.multiplicity.sum())

    def __len__(self) -> int:
        return len(self.s)

    @property
    def zeros(self) -> list[tuple[complex, float, int]]:
        return [(complex(a), float(r), int(k)) for a, r, k in zip(self.s, self.residual, self.iterations)]

    def in_rect(self, rect: Sequence[float]) -> "ZeroSet":
        m = _inside(self.s, rect)
        return replace(self, s=self.s[m], residual=self.residual[m], iterations=self.iterations[m],
                       multiplicity=self.multiplicity[m], rect=tuple(float(x) for x in rect), audit=None)

    @classmethod
    def empty(cls, rect, n, b) -> "ZeroSet":
        return cls(np.zeros(0, complex), np.zeros(0), np.zeros(0, np.int64), tuple(rect), n, b)


def _inside(s: np.ndarray, rect: Sequence[float]) -> np.ndarray:
    a, b, c, d = rect
    return (s.real >= a) & (s.real <= b) & (s.imag >= c) & (s.imag <= d)


def _check_rect(rect: Sequence[float]) -> tuple[float, float, float, float]:
    if len(rect) != 4:
        raise DomainError("rect must have four entries (sigma_min, sigma_max, t_min, t_max)")
    a, b, c, d = (float(x) for x in rect)
    if not all(math.isfinite(x) for x in (a, b, c, d)) or not (a < b and c < d):
        raise DomainError(f"degenerate rectangle {rect}")
    if a < -0.1 or b > 1.0:
        raise DomainError("rectangle must lie in the strip -0.1 <= sigma <= 1")
    return a, b, c, d


# -- delta -------------------------------------------------------------------

def find_real_delta(table: CoefficientTable, n: int, step: float = 1e-4, xtol: float = 1e-12) -> float:
    """Largest zero of ``Z_n`` on ``(0, 1)``: sign scan then bisection."""
    ev = table.evaluator(_even(n, table))
    grid = np.arange(1, int(round(1 / step))) * step
    vals = np.real(ev(grid.astype(complex)))
    sign = np.sign(vals)
    change = np.nonzero(sign[:-1] * sign[1:] <= 0)[0]
    if not len(change):
        raise NoRealZeroError(f"Z_{n} has no sign change on (0, 1) for b={table.b}")
    k = change[-1]
    lo, hi = float(grid[k]), float(grid[k + 1])
    flo = vals[k]
    if vals[k + 1] == 0:
        return hi
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        fm = ev(complex(mid)).real
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _even(n: int, table: CoefficientTable) -> int:
    if n > table.n_max:
        raise DomainError(f"n={n} exceeds table n_max={table.n_max}")
    if n < 0:
        raise DomainError("n must be nonnegative")
    return n - n % 2


def default_grid_step(b: float, delta: float) -> tuple[float, float]:
    """``(horizontal, vertical)`` seed spacing: ``delta/8`` and ``min(pi/(4b), 0.02)``."""
    return delta / 8.0, min(math.pi / (4.0 * b), 0.02)


# -- Newton --------------------------------------------------------------------

def _newton_chunk(ev: ExpSumEvaluator, seeds: np.ndarray, cap: float,
                  deflate: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s = seeds.astype(complex).copy()
    its = np.zeros(len(s), dtype=np.int64)
    conv = np.zeros(len(s), dtype=bool)
    act = np.arange(len(s))
    for _ in range(MAX_ITER):
        if not len(act):
            break
        z, dz = ev.fast_value_and_derivative(s[act])
        with np.errstate(all="ignore"):
            step = z / dz
            if deflate is not None and len(deflate):
                # Newton on Z / prod(s - r): step = 1 / (Z'/Z - sum 1/(s - r))
                corr = (1.0 / (s[act, None] - deflate[None, :])).sum(axis=1)
                step = 1.0 / (1.0 / step - corr)
        bad = ~np.isfinite(step)
        step[bad] = 0
        mag = np.abs(step)
        big = mag > cap
        step[big] *= cap / mag[big]
        s[act] -= step
        its[act] += 1
        done = (mag < STEP_TOL * np.maximum(1.0, np.abs(s[act]))) & ~bad
        conv[act[done]] = True
        act = act[~done & ~bad]
    return s, its, conv


def _run_newton(ev, seeds, cap, threads, deflate=None):
    chunks = [seeds[i:i + CHUNK] for i in range(0, len(seeds), CHUNK)]
    if not chunks:
        return np.zeros(0, complex), np.zeros(0, np.int64), np.zeros(0, bool)
    work = lambda c: _newton_chunk(ev, c, cap, deflate)  # noqa: E731
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            res = list(pool.map(work, chunks))
    else:
        res = [work(c) for c in chunks]
    return tuple(np.concatenate(x) for x in zip(*res))


def newton_polish(table: CoefficientTable, n: int, s0: complex) -> tuple[complex, int]:
    """Single-start Newton iteration; returns the limit and the iteration count."""
    ev = table.evaluator(_even(n, table))
    s, its, conv = _newton_chunk(ev, np.array([complex(s0)]), cap=0.1)
    if not conv[0]:
        raise AuditError(f"Newton did not converge from {s0}")
    return complex(s[0]), int(its[0])


def _dedup(s: np.ndarray, res: np.ndarray, its: np.ndarray, radius: float):
    """Keep one point per cluster (lowest residual), deterministic in input order."""
    if not len(s):
        return s, res, its
    # collapse repeats of the same limit first; the pair search is then small
    q = radius * 1e-3
    key = np.c_[np.round(s.real / q), np.round(s.imag / q)]
    order = np.lexsort((res, key[:, 0], key[:, 1]))
    s, res, its, key = s[order], res[order], its[order], key[order]
    first = np.ones(len(s), dtype=bool)
    first[1:] = np.any(key[1:] != key[:-1], axis=1)
    s, res, its = s[first], res[first], its[first]
    tree = cKDTree(np.c_[s.real, s.imag])
    pairs = tree.query_pairs(radius, output_type="ndarray")
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(s), len(s)))
    _, label = connected_components(graph, directed=False)
    best = np.lexsort((np.arange(len(s)), res, label))
    keep = best[np.r_[True, label[best][1:] != label[best][:-1]]]
    s, res, its = s[keep], res[keep], its[keep]
    order = np.lexsort((s.real, s.imag))
    return s[order], res[order], its[order]


def _seeds(rect, hstep, vstep):
    a, b, c, d = rect
    ns = max(2, int(math.ceil((b - a) / hstep)) + 1)
    nt = max(2, int(math.ceil((d - c) / vstep)) + 1)
    sig = np.linspace(a, b, ns)
    ts = c + vstep * np.arange(nt)
    S, T = np.meshgrid(sig, ts)
    return (S + 1j * T).ravel()


def _multiplicities(ev: ExpSumEvaluator, s: np.ndarray, cap: float = MULT_RADIUS) -> np.ndarray:
    """Local winding number around each zero on a circle inside its isolation disk."""
    if not len(s):
        return np.zeros(0, dtype=np.int64)
    if len(s) > 1:
        dist, _ = cKDTree(np.c_[s.real, s.imag]).query(np.c_[s.real, s.imag], k=2)
        rho = np.minimum(cap, 0.4 * dist[:, 1])
    else:
        rho = np.array([cap])
    out = np.zeros(len(s), dtype=np.int64)
    for npts in (64, 512, 4096):
        todo = np.nonzero(out == 0)[0]
        if not len(todo):
            break
        th = np.exp(2j * np.pi * np.arange(npts + 1) / npts)
        vals = ev((s[todo, None] + rho[todo, None] * th[None, :]).ravel()).reshape(len(todo), npts + 1)
        darg = np.angle(vals[:, 1:] / vals[:, :-1])
        fine = np.abs(darg).max(axis=1) < 0.5 * math.pi
        out[todo[fine]] = np.rint(darg[fine].sum(axis=1) / (2 * math.pi)).astype(np.int64)
    # anything still unresolved is counted once
    out[out <= 0] = 1
    return out


def _certified(ev: ExpSumEvaluator, s: np.ndarray, radius: float) -> np.ndarray:
    """Mask of points with a zero inside the circle of ``radius`` around them."""
    if not len(s):
        return np.zeros(0, dtype=bool)
    th = np.exp(2j * np.pi * np.arange(129) / 128)
    vals = ev((s[:, None] + radius * th[None, :]).ravel()).reshape(len(s), 129)
    darg = np.angle(vals[:, 1:] / vals[:, :-1])
    wind = np.rint(darg.sum(axis=1) / (2 * math.pi))
    return (np.abs(darg).max(axis=1) < 0.5 * math.pi) & (wind >= 1)


def _search(table, n, rect, hstep, vstep, tol, threads, radius, strip, deflate=None):
    ev = table.evaluator(n)
    seeds = _seeds(rect, hstep, vstep)
    cap = 4.0 * max(hstep, vstep)
    s, its, conv = _run_newton(ev, seeds, cap, thread_count(threads), deflate)
    lo, hi = strip
    m = (s.real >= lo) & (s.real <= hi) & np.isfinite(s)
    meta = {"seeds": int(len(seeds)), "step_not_converged": int((~conv).sum())}
    s, its = s[m], its[m]
    res = np.abs(ev(s)) if len(s) else np.zeros(0)
    ok = res <= tol
    # Far up the strip the rounding floor of Z_n exceeds tol, and Newton
    # stalls next to (near-)double zeros.  Such end points are kept only
    # when a small circle around them winds around a zero.
    loose = ~ok & (res <= CERT_RESIDUAL)
    if loose.any():
        cs, cr, ci = _dedup(s[loose], res[loose], its[loose], radius)
        good = _certified(ev, cs, CERT_RADIUS)
        meta["certified"] = int(good.sum())
        s = np.concatenate([s[ok], cs[good]])
        res = np.concatenate([res[ok], cr[good]])
        its = np.concatenate([its[ok], ci[good]])
    else:
        s, res, its = s[ok], res[ok], its[ok]
    meta["rejected"] = int(len(seeds) - len(s))
    s, res, its = _dedup(s, res, its, radius)
    return s, res, its, meta


def find_zeros_rect(table: CoefficientTable, n: int, rect: Sequence[float],
                    grid_step: float | tuple[float, float] | None = None, tol: float = RESIDUAL_TOL, *,
                    delta: float | None = None, dedup_radius: float = DEDUP_RADIUS,
                    audit: bool = False, threads: int | None = None,
                    repair_rounds: int = 2) -> ZeroSet:
    """Zeros of ``Z_n`` in ``rect`` from Newton iteration on a seed grid.

    Parameters
    ----------
    grid_step : float or (float, float), optional
        Vertical step, or ``(horizontal, vertical)``.  Defaults to
        :func:`default_grid_step`.
    delta : float, optional
        Largest real zero; computed when omitted.
    dedup_radius : float
        Newton limits closer than this are one zero.  Kept small because
        the symmetry of the surface makes many zeros (numerically) double;
        each stored zero carries a multiplicity from a local winding number.
    audit : bool
        Compare with the winding number slab by slab and repair mismatches.

    Only ``t >= 0`` is searched; the lower half is filled in by conjugation.
    """
    rect = _check_rect(rect)
    n = _even(n, table)
    b = table.b
    if n == 0:
        return ZeroSet.empty(rect, n, b)
    if delta is None:
        delta = find_real_delta(table, n)
    hdef, vdef = default_grid_step(b, delta)
    if grid_step is None:
        hstep, vstep = hdef, vdef
    elif np.ndim(grid_step):
        hstep, vstep = (float(x) for x in grid_step)
    else:
        hstep, vstep = hdef, float(grid_step)
    if not (hstep > 0 and vstep > 0 and dedup_radius > 0):
        raise DomainError("grid steps and dedup radius must be positive")
    radius = float(dedup_radius)
    a, bb, c, d = rect
    if d < 0:
        # entirely below the axis: solve the mirror image
        m = find_zeros_rect(table, n, (a, bb, -d, -c), (hstep, vstep), tol, delta=delta,
                            dedup_radius=radius, audit=audit, threads=threads,
                            repair_rounds=repair_rounds)
        return _finish(np.conj(m.s), m.residual, m.iterations, m.multiplicity, rect, n, b,
                       m.audit, {**m.meta, "mirrored": True})
    strip = (max(a, -STRIP_SLACK), min(bb, delta + STRIP_SLACK))
    meta: dict = {"grid_step": (hstep, vstep), "dedup_radius": radius, "delta": delta}
    if strip[0] > strip[1]:
        return ZeroSet.empty(rect, n, b)
    pad = 2 * vstep
    t_lo = 0.0 if c <= 0 else max(0.0, c - pad)
    upper = (max(-0.1, strip[0] - hstep), min(1.0, strip[1] + hstep), t_lo, max(d, -c) + pad)
    # zeros just left of the strip are kept until the final cut so that a
    # split pair straddling the left edge is not mistaken for a double zero
    keep = (max(-0.1, strip[0] - hstep), strip[1])
    s, res, its, m0 = _search(table, n, upper, hstep, vstep, tol, threads, radius, keep)
    meta.update(m0)
    s = np.where(np.abs(s.imag) < radius, s.real + 0j, s)
    up = s.imag >= 0
    s, res, its = s[up], res[up], its[up]
    mult = _multiplicities(table.evaluator(n), s)

    audit_pair = None
    if audit:
        s, res, its, mult, audit_pair, amet = _audit_and_repair(
            table, n, (strip[0], strip[1], max(c, 0.0), max(d, -c)), s, res, its, mult, hstep, vstep, tol,
            threads, radius, keep, repair_rounds)
        meta.update(amet)
    if c < 0:
        mir = s.imag > 0
        if audit_pair is not None:
            # the audit covered [0, max(d, -c)]; rebuild the totals for the requested window
            w = winding_detail(table, n, (strip[0], strip[1], c, d), vstep)
            s_all = np.concatenate([s, np.conj(s[mir])])
            mult_all = np.concatenate([mult, mult[mir]])
            audit_pair = (w.count, int(mult_all[_inside(s_all, w.rect)].sum()))
        s = np.concatenate([s, np.conj(s[mir])])
        res = np.concatenate([res, res[mir]])
        its = np.concatenate([its, its[mir]])
        mult = np.concatenate([mult, mult[mir]])
    return _finish(s, res, its, mult, rect, n, b, audit_pair, meta)


def _finish(s, res, its, mult, rect, n, b, audit_pair, meta):
    m = _inside(s, rect)
    s, res, its, mult = s[m], res[m], its[m], mult[m]
    order = np.lexsort((s.real, s.imag))
    return ZeroSet(s[order], res[order], its[order], tuple(rect), n, b, audit_pair, mult[order], meta)


def _audit_and_repair(table, n, rect, s, res, its, mult, hstep, vstep, tol, threads, radius, strip, rounds):
    a, bb, c, d = rect
    ev = table.evaluator(n)
    nslab = max(1, int(math.ceil((d - c) / AUDIT_SLAB)))
    edges = np.linspace(c, d, nslab + 1)
    win_total = found_total = 0
    repaired = 0
    mismatched = []
    for k in range(nslab):
        sub = (a, bb, float(edges[k]), float(edges[k + 1]))
        w = winding_detail(table, n, sub, vstep)
        used = w.rect
        found = int(mult[_inside(s, used)].sum())
        h, v = hstep, vstep
        r = 0
        while found != w.count and r < rounds:
            r += 1
            h, v = h / 2, v / 2
            near = _inside(s, _grow(used, 4 * v))
            known = np.repeat(s[near], mult[near])
            region = _grow(used, v)
            region = (max(region[0], -0.1), min(region[1], 1.0), max(region[2], 0.0), region[3])
            s2, res2, its2, _ = _search(table, n, region, h, v, tol, threads, radius, strip, deflate=known)
            s = np.concatenate([s, s2])
            res = np.concatenate([res, res2])
            its = np.concatenate([its, its2])
            s, res, its = _dedup(s, res, its, radius)
            mult = _multiplicities(ev, s)
            found = int(mult[_inside(s, used)].sum())
            repaired += 1
        if found != w.count:
            mismatched.append((used, w.count, found))
        win_total += w.count
        found_total += found
    return s, res, its, mult, (win_total, found_total), {"repairs": repaired, "mismatched_slabs": mismatched}


def _grow(rect, h):
    a, b, c, d = rect
    return (a - h, b + h, c - h, d + h)


# -- argument principle ------------------------------------------------------------

@dataclass(frozen=True)
class WindingResult:
    count: int
    rect: tuple[float, float, float, float]
    samples: int
    retries: int


def _edge_argument(f: Callable, p0: complex, p1: complex, h0: float, margin: float,
                   max_samples: int = 5_000_000) -> tuple[float, int]:
    """Total argument change of ``f`` along a segment.

    ``f`` returns values and derivatives.  An interval is refined while the
    argument jumps by pi/2 or more, or while it is longer than half of
    ``|f / f'|`` (the Newton distance, which estimates how close a zero is)
    at either end; the second rule stops a fast full turn near a zero from
    aliasing to nothing.
    """
    length = abs(p1 - p0)
    k = max(8, int(math.ceil(length / h0)))
    u = np.linspace(0.0, 1.0, k + 1)
    vals, dvals = f(p0 + (p1 - p0) * u)
    while True:
        if np.any(np.abs(vals) <= margin) or not np.all(np.isfinite(vals)):
            raise _BoundaryHit()
        darg = np.angle(vals[1:] / vals[:-1])
        with np.errstate(divide="ignore"):
            near = np.abs(vals) / np.abs(dvals)
        h = np.diff(u) * length
        bad = (np.abs(darg) >= 0.5 * math.pi) | (h > 0.5 * np.minimum(near[1:], near[:-1]))
        if not bad.any():
            return float(darg.sum()), len(u)
        if len(u) > max_samples or np.min(h[bad]) < 1e-12:
            raise _BoundaryHit()
        mid = 0.5 * (u[:-1][bad] + u[1:][bad])
        fm, dfm = f(p0 + (p1 - p0) * mid)
        u = np.concatenate([u, mid])
        vals = np.concatenate([vals, fm])
        dvals = np.concatenate([dvals, dfm])
        order = np.argsort(u, kind="stable")
        u, vals, dvals = u[order], vals[order], dvals[order]


class _BoundaryHit(Exception):
    pass


def winding_detail(table: CoefficientTable, n: int, rect: Sequence[float], grid_step: float | None = None,
                   boundary_margin: float = 1e-8, retries: int = 3) -> WindingResult:
    """Argument-principle zero count with the rectangle actually used.

    If a zero sits on (or too near) the boundary the rectangle is enlarged
    by half a grid step and the count retried.
    """
    a, b, c, d = _check_rect(rect)
    n = _even(n, table)
    if n == 0:
        return WindingResult(0, (a, b, c, d), 0, 0)
    ev = table.evaluator(n)
    step = grid_step if grid_step is not None else min(math.pi / (4 * table.b), 0.02)
    # one radian per sample for the fastest exponential in Z_n
    h0 = 1.0 / (n * table.b * 1.2)
    cur = (a, b, c, d)
    for attempt in range(retries + 1):
        a1, b1, c1, d1 = cur
        corners = [complex(a1, c1), complex(b1, c1), complex(b1, d1), complex(a1, d1)]
        try:
            total, samples = 0.0, 0
            for i in range(4):
                arg, k = _edge_argument(ev.value_and_derivative, corners[i], corners[(i + 1) % 4], h0, boundary_margin)
                total += arg
                samples += k
        except _BoundaryHit:
            h = 0.5 * step * (attempt + 1)
            cur = (a1 - h, b1 + h, c1 - h, d1 + h)
            continue
        count = total / (2 * math.pi)
        if abs(count - round(count)) > 1e-6:
            raise AuditError(f"non-integral winding {count}")
        return WindingResult(int(round(count)), cur, samples, attempt)
    raise AuditError(f"zero on the boundary of {rect} persisted after {retries} retries")


def winding_count(table: CoefficientTable, n: int, rect: Sequence[float], grid_step: float | None = None) -> int:
    """Number of zeros of ``Z_n`` inside ``rect`` by the argument principle."""
    return winding_detail(table, n, rect, grid_step).count


# -- endpoint zeros ------------------------------------------------------------

def endpoint_set(zs: ZeroSet, radius: float | None = None) -> np.ndarray:
    """Zeros whose real part exceeds that of every other zero within ``radius``.

    ``radius`` defaults to ``pi/2 * exp(b)``.  Zeros closer than ``radius``
    to the edge of the searched window are dropped because their
    neighbourhood is incomplete.
    """
    r = radius if radius is not None else 0.5 * math.pi * math.exp(zs.b)
    s = zs.s
    if not len(s):
        return s
    _, _, c, d = zs.rect
    pts = s
    if c >= 0:
        # the lower half-plane is the mirror image
        pts = np.concatenate([s, np.conj(s[s.imag > 0])])
    tree = cKDTree(np.c_[pts.real, pts.imag])
    out = []
    for i, nb in enumerate(tree.query_ball_point(np.c_[s.real, s.imag], r)):
        if s[i].imag + r > d or (c > 0 and s[i].imag - r < c):
            continue
        if all(pts[j].real < s[i].real for j in nb if pts[j] != s[i]):
            out.append(s[i])
    return np.array(out)


def endpoint_zero_near(table: CoefficientTable, n: int, k: int, delta: float | None = None,
                       half_height: float | None = None) -> complex:
    """Rightmost zero in the band next to ``Re(s) = delta`` around ``i k pi e**b``.

    ``half_height`` defaults to ``pi/2 * e**b``, the radius that defines an
    endpoint zero, so the window always holds exactly one period.
    """
    if delta is None:
        delta = find_real_delta(table, n)
    b = table.b
    centre = k * math.pi * math.exp(b)
    h = 0.5 * math.pi * math.exp(b) if half_height is None else half_height
    rect = (max(-0.1, delta - 0.01), min(1.0, delta + STRIP_SLACK), centre - h, centre + h)
    zs = find_zeros_rect(table, n, rect, (0.0025, min(math.pi / (4 * b), 0.2)), delta=delta)
    if not len(zs):
        raise AuditError(f"no zero found near i*{centre}")
    return complex(zs.s[np.argmax(zs.s.real)])


# -- CSV ---------------------------------------------------------------------------

def zeros_to_csv(zs: ZeroSet, extra: dict[str, str] | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ["re", "im", "residual", "iterations", "multiplicity"] + list(extra or {})
    w.writerow(cols)
    for s, r, k, mu in zip(zs.s, zs.residual, zs.iterations, zs.multiplicity):
        w.writerow([f"{s.real:.17g}", f"{s.imag:.17g}", f"{r:.17g}", int(k), int(mu)]
                   + list((extra or {}).values()))
    return buf.getvalue()


def zeros_from_csv(text: str, b: float, n: int, rect: Sequence[float] | None = None) -> ZeroSet:
    rows = list(csv.DictReader(io.StringIO(text)))
    try:
        s = np.array([complex(float(r["re"]), float(r["im"])) for r in rows], dtype=complex)
        res = np.array([float(r["residual"]) for r in rows])
        its = np.array([int(r["iterations"]) for r in rows], dtype=np.int64)
        mult = np.array([int(r.get("multiplicity") or 1) for r in rows], dtype=np.int64)
    except (KeyError, ValueError) as exc:
        raise DomainError(f"malformed zero CSV: {exc}") from exc
    if rect is None:
        rect = ((float(s.real.min()), float(s.real.max()), float(s.imag.min()), float(s.imag.max()))
                if len(s) else (0.0, 1.0, 0.0, 1.0))
    return ZeroSet(s, res, its, tuple(rect), n, b, multiplicity=mult)
