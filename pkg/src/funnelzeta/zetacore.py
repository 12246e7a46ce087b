"""Length spectra, the coefficients ``b_m`` and ``a_n``, partial sums ``Z_n``
and the explicit truncation bound.

The zeta function is expanded as ``Z(s, z) = exp(-sum_m b_m(s) z**m / m)``
with ``b_m(s) = 2 * sum over fixed points of sigma**m of
exp(-s l) / (1 - exp(-l))``.  The factor 2 counts the two oriented closed
geodesics on the surface behind each fixed point of the reflection coding.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import BoundNotProvenError, DomainError, StateError
from .hyperbolic import SurfaceParams, geodesic_length
from .symdyn import M_CEILING, enumerate_fixed_points, symmetry_key

__all__ = [
    "ORIENTATION_FACTOR",
    "DEFAULT_N_MAX",
    "LengthSpectrum",
    "CoefficientTable",
    "ExpSumEvaluator",
    "BoundReport",
    "fixed_point_length",
    "length_spectrum",
    "b_m",
    "a_coefficients",
    "a_from_b",
    "evaluate_Zn",
    "truncation_bound",
    "bound_inequality",
    "spectra_to_csv",
    "compensated_sum",
]

ORIENTATION_FACTOR = 2
DEFAULT_N_MAX = 14
MERGE_RTOL = 1e-9


def compensated_sum(terms: np.ndarray, axis: int = -1) -> np.ndarray:
    """Neumaier summation along ``axis``, in index order.

    Works for real or complex arrays; the reduction order is fixed so
    results do not depend on thread count or BLAS.
    """
    t = np.moveaxis(np.asarray(terms), axis, -1)
    if t.shape[-1] == 0:
        return np.zeros(t.shape[:-1], dtype=t.dtype)
    total = t[..., 0].copy()
    comp = np.zeros_like(total)
    for k in range(1, t.shape[-1]):
        x = t[..., k]
        s = total + x
        if np.iscomplexobj(t):
            comp += _neumaier_err(total.real, x.real, s.real) + 1j * _neumaier_err(total.imag, x.imag, s.imag)
        else:
            comp += _neumaier_err(total, x, s)
        total = s
    return total + comp


def _neumaier_err(total, x, s):
    return np.where(np.abs(total) >= np.abs(x), (total - s) + x, (x - s) + total)


def fixed_point_length(word: Sequence[int], params: SurfaceParams) -> float:
    """Length attached to a fixed point of ``sigma**m``.

    Uses the shortest even-length root of the word, so a word ``u**k``
    with ``|u|`` odd is evaluated through ``u**2``.
    """
    w = tuple(word)
    m = len(w)
    p = next(q for q in range(1, m + 1) if m % q == 0 and w == w[q:] + w[:q])
    q = p if p % 2 == 0 else 2 * p
    return (m // q) * geodesic_length(w[:q], params)


@lru_cache(maxsize=4096)
def _canonical_length(key: tuple[int, ...], params: SurfaceParams) -> float:
    return fixed_point_length(key, params)


@lru_cache(maxsize=None)
def _class_structure(m: int, fixed_letter: int | None) -> tuple:
    """Group the orbits of ``sigma**m`` into symmetry classes.

    Returns a tuple of ``(key_word, ((rep, p), ...))`` sorted by key.
    """
    groups: dict[tuple[int, ...], list[tuple[tuple[int, ...], int]]] = {}
    for orb in enumerate_fixed_points(m):
        key = symmetry_key(orb.rep, fixed_letter)
        groups.setdefault(key, []).append((orb.rep, orb.p))
    return tuple((k, tuple(v)) for k, v in sorted(groups.items()))


@dataclass(frozen=True)
class LengthSpectrum:
    """Lengths of the fixed points of ``sigma**m`` with multiplicities.

    One entry per symmetry class; ``plus``/``minus`` hold the number of
    fixed points carrying character value +1/-1 (``minus`` is zero for the
    untwisted spectrum).
    """

    m: int
    b: float
    lengths: np.ndarray
    plus: np.ndarray
    minus: np.ndarray
    character: int | None = None

    @property
    def counts(self) -> np.ndarray:
        return self.plus - self.minus

    @property
    def total(self) -> int:
        return int(self.plus.sum() + self.minus.sum())

    def entries(self, rtol: float = MERGE_RTOL) -> list[tuple[float, int]]:
        """``(length, net count)`` pairs with lengths equal within ``rtol`` merged."""
        out: list[list] = []
        for length, cnt in zip(self.lengths, self.counts):
            if out and abs(length - out[-1][0]) <= rtol * length:
                out[-1][1] += int(cnt)
            else:
                out.append([float(length), int(cnt)])
        return [(a, b) for a, b in out]

    def signed_entries(self, rtol: float = MERGE_RTOL) -> list[tuple[float, int, int]]:
        """``(length, sign, count)`` triples merged per (length, sign)."""
        out = []
        for sign, arr in ((1, self.plus), (-1, self.minus)):
            merged: list[list] = []
            for length, cnt in zip(self.lengths, arr):
                if cnt == 0:
                    continue
                if merged and abs(length - merged[-1][0]) <= rtol * length:
                    merged[-1][1] += int(cnt)
                else:
                    merged.append([float(length), int(cnt)])
            out.extend((length, sign, cnt) for length, cnt in merged)
        return sorted(out)

    def weights(self) -> np.ndarray:
        """Coefficients ``w`` with ``b_m(s) = sum(w * exp(-s * lengths))``."""
        return ORIENTATION_FACTOR * self.counts / -np.expm1(-self.lengths)


def length_spectrum(m: int, params: SurfaceParams, character: int | None = None) -> LengthSpectrum:
    """Length spectrum of word length ``m``, optionally signed by a character.

    ``character`` is the index of the generator whose occurrences flip the
    sign, or ``None`` for the untwisted spectrum.
    """
    if not isinstance(m, int) or m < 2 or m % 2:
        raise DomainError(f"m must be an even integer >= 2, got {m!r}")
    structure = _class_structure(m, character)
    rows = []
    for key, members in structure:
        # evaluate on the fully canonical word so that classes related by a
        # surface symmetry get bit-identical lengths
        length = _canonical_length(symmetry_key(key), params)
        plus = minus = 0
        for rep, p in members:
            if character is not None and rep.count(character) % 2:
                minus += p
            else:
                plus += p
        rows.append((length, key, plus, minus))
    rows.sort()
    spec = LengthSpectrum(
        m=m,
        b=params.b,
        lengths=np.array([r[0] for r in rows]),
        plus=np.array([r[2] for r in rows], dtype=np.int64),
        minus=np.array([r[3] for r in rows], dtype=np.int64),
        character=character,
    )
    if spec.lengths[0] < m * params.b * (1 - 1e-12):
        raise StateError("length below m*b: geometry is inconsistent")
    return spec


def b_m(s, spectrum: LengthSpectrum | None, m: int | None = None):
    """``b_m(s)``; odd ``m`` (or a missing spectrum for odd ``m``) gives exactly 0."""
    if m is not None and m % 2:
        return np.zeros_like(np.asarray(s, dtype=complex)) if np.ndim(s) else 0j
    if spectrum is None:
        raise StateError("missing spectrum for even m")
    sa = np.asarray(s, dtype=complex)
    terms = np.exp(-np.multiply.outer(sa, spectrum.lengths)) * spectrum.weights()
    val = compensated_sum(terms)
    return complex(val) if sa.ndim == 0 else val


def a_from_b(bs: Sequence, n: int, dbs: Sequence | None = None):
    """Coefficients ``a_0..a_n`` from ``b_1..b_n`` (``bs[m]``, index 0 unused).

    With ``dbs`` also returns the derivatives, propagated through the
    recursion in forward mode.
    """
    shape = np.shape(bs[2]) if n >= 2 else ()
    a = [np.ones(shape, dtype=complex)] + [np.zeros(shape, dtype=complex) for _ in range(n)]
    da = [np.zeros(shape, dtype=complex) for _ in range(n + 1)] if dbs is not None else None
    for k in range(2, n + 1):
        if k % 2:
            continue
        acc = np.zeros(shape, dtype=complex)
        dacc = np.zeros(shape, dtype=complex)
        for j in range(0, k - 1, 2):
            acc = acc + a[j] * bs[k - j]
            if da is not None:
                dacc = dacc + da[j] * bs[k - j] + a[j] * dbs[k - j]
        a[k] = -acc / k
        if da is not None:
            da[k] = -dacc / k
    return (a, da) if dbs is not None else a


@dataclass(frozen=True)
class CoefficientTable:
    """Spectra for ``m = 2, 4, ..., n_max`` computed for one surface."""

    n_max: int
    params: SurfaceParams
    spectra: dict = field(repr=False)
    character: int | None = None

    @classmethod
    def build(cls, params: SurfaceParams, n_max: int = DEFAULT_N_MAX,
              character: int | None = None) -> "CoefficientTable":
        if not isinstance(n_max, int) or n_max < 0 or n_max % 2:
            raise DomainError(f"n_max must be a nonnegative even integer, got {n_max!r}")
        if n_max > M_CEILING:
            raise DomainError(f"n_max={n_max} exceeds the ceiling {M_CEILING}")
        spectra = {m: length_spectrum(m, params, character) for m in range(2, n_max + 1, 2)}
        return cls(n_max=n_max, params=params, spectra=spectra, character=character)

    @property
    def b(self) -> float:
        return self.params.b

    def check_complete(self, n: int) -> None:
        missing = [m for m in range(2, n + 1, 2) if m not in self.spectra]
        if missing or n > self.n_max:
            raise StateError(f"table incomplete for n={n}: missing m={missing}")

    def evaluator(self, n: int | None = None) -> "ExpSumEvaluator":
        n = self.n_max if n is None else n
        if n > self.n_max or n < 0 or n % 2:
            raise DomainError(f"n={n} must be even and at most n_max={self.n_max}")
        self.check_complete(n)
        return ExpSumEvaluator(n, [self.spectra[m] for m in range(2, n + 1, 2)])


# rows per batch in the compensated path; bounds the (points x lengths) work array
_ROWS = 8192


class ExpSumEvaluator:
    """Vectorised evaluation of ``Z_n`` and its derivative.

    The derivative is exact: each ``b_m`` is differentiated term by term
    and pushed through the ``a_n`` recursion.
    """

    def __init__(self, n: int, spectra: Iterable[LengthSpectrum]):
        self.n = n
        self._spec = {sp.m: (sp.lengths, sp.weights()) for sp in spectra}
        ms = sorted(self._spec)
        self._ms = ms
        self._all_len = np.concatenate([self._spec[m][0] for m in ms]) if ms else np.zeros(0)
        self._all_w = np.concatenate([self._spec[m][1] for m in ms]) if ms else np.zeros(0)
        self._starts = np.cumsum([0] + [len(self._spec[m][0]) for m in ms[:-1]]).astype(np.intp)

    def fast_value_and_derivative(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Uncompensated variant for Newton sweeps over large seed arrays.

        Each row is reduced on its own, so results do not depend on how the
        seeds are chunked.
        """
        s = np.asarray(s, dtype=complex).ravel()
        if self.n == 0:
            return np.ones_like(s), np.zeros_like(s)
        e = np.exp(np.multiply.outer(-s, self._all_len))
        e *= self._all_w
        bsum = np.add.reduceat(e, self._starts, axis=1)
        e *= self._all_len
        dsum = -np.add.reduceat(e, self._starts, axis=1)
        bs = [None, 0] + [0] * (self.n - 1)
        dbs = [None, 0] + [0] * (self.n - 1)
        for i, m in enumerate(self._ms):
            bs[m] = bsum[:, i]
            dbs[m] = dsum[:, i]
        a, da = a_from_b(bs, self.n, dbs)
        z = a[0].copy()
        dz = da[0].copy()
        for k in range(2, self.n + 1, 2):
            z += a[k]
            dz += da[k]
        return z, dz

    def _bs(self, s: np.ndarray, derivative: bool):
        bs = [None, 0] + [0] * (self.n - 1)
        dbs = [None, 0] + [0] * (self.n - 1) if derivative else None
        for m, (lengths, w) in self._spec.items():
            e = np.exp(-np.multiply.outer(s, lengths)) * w
            bs[m] = compensated_sum(e)
            if derivative:
                dbs[m] = -compensated_sum(e * lengths)
        return bs, dbs

    def coefficients(self, s) -> list:
        sa = np.asarray(s, dtype=complex)
        bs, _ = self._bs(sa, False)
        return a_from_b(bs, self.n)

    def __call__(self, s):
        sa = np.asarray(s, dtype=complex)
        if self.n == 0:
            return np.ones_like(sa) if sa.ndim else 1 + 0j
        if sa.size > _ROWS:
            flat = sa.ravel()
            return np.concatenate([self(flat[i:i + _ROWS]) for i in range(0, flat.size, _ROWS)]).reshape(sa.shape)
        a = self.coefficients(sa)
        val = _sum_list(a)
        return complex(val) if sa.ndim == 0 else val

    def value_and_derivative(self, s):
        sa = np.asarray(s, dtype=complex)
        if self.n == 0:
            return np.ones_like(sa), np.zeros_like(sa)
        if sa.size > _ROWS:
            flat = sa.ravel()
            parts = [self.value_and_derivative(flat[i:i + _ROWS]) for i in range(0, flat.size, _ROWS)]
            return tuple(np.concatenate(x).reshape(sa.shape) for x in zip(*parts))
        bs, dbs = self._bs(sa, True)
        a, da = a_from_b(bs, self.n, dbs)
        return _sum_list(a), _sum_list(da)

    def magnitude_scale(self, s) -> np.ndarray:
        """Sum of ``|a_k(s)|``; the rounding floor of ``|Z_n(s)|`` is about eps times this."""
        a = self.coefficients(np.asarray(s, dtype=complex))
        return sum(np.abs(x) for x in a)


def _sum_list(terms: list) -> np.ndarray:
    return compensated_sum(np.stack(np.broadcast_arrays(*terms), axis=-1))


def a_coefficients(s: complex, table: CoefficientTable) -> list[complex]:
    """``[a_0, ..., a_{n_max}]`` at a single point ``s``."""
    table.check_complete(table.n_max)
    a = table.evaluator(table.n_max).coefficients(complex(s))
    return [complex(x) for x in a]


def evaluate_Zn(s, n: int, table: CoefficientTable):
    """Partial sum ``Z_n(s) = 1 + a_1(s) + ... + a_n(s)``."""
    if n > table.n_max:
        raise DomainError(f"n={n} exceeds table n_max={table.n_max}")
    if n < 0:
        raise DomainError("n must be nonnegative")
    n_even = n - (n % 2)  # odd coefficients vanish
    return table.evaluator(n_even)(s)


def spectra_to_csv(spectra: Iterable[LengthSpectrum], rtol: float = MERGE_RTOL) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "length", "count"])
    for sp in spectra:
        for length, cnt in sp.entries(rtol):
            w.writerow([sp.m, f"{length:.17g}", cnt])
    return buf.getvalue()


# -- truncation bound ---------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    eta: float
    log_eta: float
    inequality_holds: bool
    lhs: float
    rhs: float
    k0: float


def bound_inequality(b: float, n: int, kappa: float, k2: float) -> tuple[float, float]:
    """Both sides of the condition that makes ``|a_n|`` a Gaussian tail in ``n``.

    The bound is valid when ``lhs < rhs``.
    """
    lhs = (n * (math.log(4) + b * (kappa + 4) / 3 + b * (2 - kappa) / 6)
           + 0.5 * n * (n + 1) * math.log(2) + 0.5 * n * math.log(n))
    rhs = b * n * n * (2 - kappa) * k2 / 6
    return lhs, rhs


def truncation_bound(b: float, n: int, T: float, kappa: float = 1.05, k2: float = 0.95) -> BoundReport:
    """Upper bound ``eta(b, n, T)`` on ``sup |Z - Z_n|`` over the strip of height ``T``.

    With ``q = b(2-kappa)(1-k2)/6`` and ``p = 4 T exp(-kappa b)`` this is the
    Gaussian tail ``sqrt(pi)/(2 sqrt(q)) exp(p^2/(4q)) exp(-q (n - p/(2q))^2)``.

    Raises
    ------
    BoundNotProvenError
        Outside ``b >= 20``, ``n >= 14``, ``1 < kappa < 2``, ``0.95 <= k2 < 1``.
    """
    if not (b >= 20 and n >= 14 and 1 < kappa < 2 and 0.95 <= k2 < 1 and T > 0):
        raise BoundNotProvenError(
            f"bound not proven for b={b}, n={n}, kappa={kappa}, k2={k2}, T={T}; "
            "requires b>=20, n>=14, 1<kappa<2, 0.95<=k2<1, T>0")
    k0 = T * math.exp(-kappa * b)
    denom = b * (2 - kappa) * (1 - k2)
    log_eta = (0.5 * math.log(6 * math.pi) - math.log(2.0) - 0.5 * math.log(denom)
               + 24 * k0 * k0 / denom
               + b * (2 - kappa) * (k2 - 1) / 6 * (n - 12 * k0 / denom) ** 2)
    lhs, rhs = bound_inequality(b, n, kappa, k2)
    return BoundReport(eta=math.exp(log_eta), log_eta=log_eta, inequality_holds=lhs < rhs,
                       lhs=lhs, rhs=rhs, k0=k0)
