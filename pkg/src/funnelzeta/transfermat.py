"""The word-length-2 approximation: segment lengths, the 6x6 matrices
``C(z)`` and ``B(z) = C(z)**2``, their eigenvalues, determinants and the
integer polynomials hidden in them.

States are ordered ``(1,2), (1,3), (2,1), (2,3), (3,1), (3,2)``.  The move
``(a, b) -> (b, c)`` carries weight 1 when ``c == a`` and ``z`` otherwise,
so the exponent of ``z`` along a cycle is its c-weight.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, NumericalError

__all__ = [
    "STATES",
    "IntPolynomial",
    "segment_length_r2",
    "build_C",
    "build_B",
    "eigenvalues_mu",
    "det_approx",
    "det_approx_from_polys",
    "det_transfer",
    "det_polynomials",
    "trace_poly_dk",
    "polys_to_json",
]

STATES = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))
_INDEX = {s: i for i, s in enumerate(STATES)}


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients by ascending degree, trailing zeros trimmed."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, y):
        acc = 0 * y
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __add__(self, o: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, o: "IntPolynomial") -> "IntPolynomial":
        if not self.coeffs or not o.coeffs:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(o.coeffs):
                out[i + j] += x * y
        return IntPolynomial(tuple(out))

    def __pow__(self, k: int) -> "IntPolynomial":
        out = IntPolynomial((1,))
        for _ in range(k):
            out = out * self
        return out

    def as_dict(self) -> dict[int, int]:
        return {k: c for k, c in enumerate(self.coeffs) if c}

    def to_list(self) -> list[int]:
        return list(self.coeffs)


def segment_length_r2(triple: Sequence[int], b: float) -> float:
    """Main term of the length contributed by the middle letter of ``triple``."""
    if len(triple) != 3 or any(x not in (1, 2, 3) for x in triple):
        raise DomainError(f"expected three symbols in {{1,2,3}}, got {tuple(triple)}")
    x1, x2, x3 = triple
    if x1 == x2 or x2 == x3:
        raise DomainError(f"triple {tuple(triple)} is not admissible")
    if not b > 0:
        raise DomainError("b must be positive")
    return b if x1 == x3 else b + math.exp(-b)


def build_C(z, dtype=complex) -> np.ndarray:
    """The one-step matrix with entries in ``{0, 1, z}``."""
    C = np.zeros((6, 6), dtype=dtype)
    one = 1 if dtype is object else dtype(1)
    for (a, b), i in _INDEX.items():
        for c in (1, 2, 3):
            if c != b:
                C[i, _INDEX[(b, c)]] = one if c == a else z
    return C


def build_B(z, dtype=complex) -> np.ndarray:
    """``B(z) = C(z) @ C(z)``; its diagonal is all ones."""
    C = build_C(z, dtype)
    return C.dot(C)


def eigenvalues_mu(z: complex) -> tuple[complex, complex, complex, complex]:
    """``mu_1..mu_4`` with the principal branch of ``sqrt(4 - 3 z**2)``.

    The spectrum of ``B(z)`` is ``mu_1, mu_2`` simple and ``mu_3, mu_4`` double.
    """
    z = complex(z)
    r = cmath.sqrt(4 - 3 * z * z)
    return ((z - 1) ** 2, (z + 1) ** 2, 1 - z * z / 2 + z * r / 2, 1 - z * z / 2 - z * r / 2)


def _xy(sigma, t, b):
    x = np.exp(-2 * np.asarray(sigma) - 2j * np.asarray(t) * b * math.exp(b))
    y = np.exp(-1j * np.asarray(t))
    return x, y


def det_approx(sigma: float, t: float, b: float) -> complex:
    """``det(I - x B(y))`` with ``x = exp(-2 sigma - 2 i t b e**b)`` and ``y = exp(-i t)``.

    This is the limit of ``Z(sigma/b + i t e**b)``: there ``exp(-2bs) = x``
    and ``z = exp(-s e**-b) = y * exp(-sigma e**-b / b)``.
    """
    x, y = _xy(sigma, t, b)
    return complex(np.linalg.det(np.eye(6) - complex(x) * build_B(complex(y))))


def det_approx_from_polys(sigma, t, b, polys: Sequence[IntPolynomial] | None = None):
    """Vectorised ``sum_k x**k P_k(y)``; agrees with :func:`det_approx`."""
    polys = det_polynomials() if polys is None else polys
    x, y = _xy(sigma, t, b)
    total = np.zeros(np.broadcast(x, y).shape, dtype=complex)
    for k in reversed(range(len(polys))):
        total = total * x + polys[k](y)
    return total if total.ndim else complex(total)


def det_transfer(s: complex, b: float) -> complex:
    """``det(I - A(s)**2) = det(I - exp(-2bs) B(exp(-s e**-b)))``."""
    s = complex(s)
    z = cmath.exp(-s * math.exp(-b))
    return complex(np.linalg.det(np.eye(6) - cmath.exp(-2 * b * s) * build_B(z)))


# -- exact integer extraction -------------------------------------------------

def _bareiss_det(M: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    A = [row[:] for row in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _interpolate(nodes: Sequence[int], values: Sequence) -> list[Fraction]:
    """Coefficients (ascending) of the polynomial through ``(nodes, values)`` via Newton divided differences."""
    n = len(nodes)
    dd = [Fraction(v) for v in values]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - j])
    coeffs = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # coeffs <- coeffs * (X - nodes[i]) + dd[i]
        new = [Fraction(0)] * n
        for k in range(n - 1):
            new[k + 1] += coeffs[k]
            new[k] -= nodes[i] * coeffs[k]
        new[0] += dd[i]
        coeffs = new
    return coeffs


def _as_int_poly(coeffs: Sequence[Fraction]) -> IntPolynomial:
    if any(c.denominator != 1 for c in coeffs):
        raise NumericalError(f"interpolated coefficients are not integral: {coeffs}")
    return IntPolynomial(tuple(int(c) for c in coeffs))


def det_polynomials() -> list[IntPolynomial]:
    """``P_0..P_6`` with ``det(I - x B(y)) = sum_k x**k P_k(y)``, exactly.

    The determinant is evaluated in exact integer arithmetic on the grid
    ``x in 0..6``, ``y in 0..12`` (the degrees are at most 6 and 12) and
    interpolated over the rationals; integrality is asserted.
    """
    xs, ys = list(range(7)), list(range(13))
    # for each y, the polynomial in x
    by_y = []
    for y in ys:
        B = build_B(y, dtype=object)
        vals = [_bareiss_det([[(1 if i == j else 0) - x * int(B[i, j]) for j in range(6)] for i in range(6)])
                for x in xs]
        by_y.append(_interpolate(xs, vals))
    return [_as_int_poly(_interpolate(ys, [by_y[iy][k] for iy in range(len(ys))])) for k in range(7)]


def trace_poly_dk(n: int) -> IntPolynomial:
    """``tr C(z)**(2n)`` as an integer polynomial in ``z``.

    The coefficient of ``z**k`` counts fixed points of ``sigma**(2n)`` with
    c-weight ``k``; exact integer arithmetic throughout.
    """
    if not isinstance(n, int) or not 1 <= n <= 8:
        raise DomainError(f"n must be an integer in 1..8, got {n!r}")
    nodes = list(range(2 * n + 1))
    vals = []
    for z in nodes:
        C = build_C(z, dtype=object)
        P = np.identity(6, dtype=object) * 1
        for _ in range(2 * n):
            P = P.dot(C)
        vals.append(sum(int(P[i, i]) for i in range(6)))
    return _as_int_poly(_interpolate(nodes, vals))


def polys_to_json(polys: Sequence[IntPolynomial]) -> str:
    return json.dumps([p.to_list() for p in polys])
