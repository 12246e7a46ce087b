"""Zeta functions twisted by a rank-one Z/2 character.

The character sends a closed geodesic to ``(-1)**k`` where ``k`` counts the
occurrences of one generator in its cutting word.  Twisting only changes
the signs of the fixed-point counts, so the ``a_n`` recursion is reused.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .hyperbolic import SurfaceParams
from .symdyn import is_admissible
from .zetacore import (
    DEFAULT_N_MAX,
    CoefficientTable,
    LengthSpectrum,
    a_from_b,
    b_m,
    length_spectrum,
)

__all__ = [
    "Character",
    "twisted_spectrum",
    "l_table",
    "evaluate_L",
    "cover_coefficients",
    "product_coefficients",
    "multiplicativity_residual",
]


@dataclass(frozen=True)
class Character:
    """``chi(w) = (-1)**(number of generator_index in w)``; ``None`` is the trivial character."""

    generator_index: int | None

    def __post_init__(self):
        if self.generator_index not in (None, 1, 2, 3):
            raise DomainError(f"generator index must be 1, 2, 3 or None, got {self.generator_index!r}")

    @classmethod
    def trivial(cls) -> "Character":
        return cls(None)

    def __call__(self, word: Sequence[int]) -> int:
        if self.generator_index is None:
            return 1
        return -1 if tuple(word).count(self.generator_index) % 2 else 1

    @property
    def label(self) -> str:
        return "trivial" if self.generator_index is None else f"g{self.generator_index}"


def twisted_spectrum(m: int, params: SurfaceParams, chi: Character) -> LengthSpectrum:
    return length_spectrum(m, params, character=chi.generator_index)


def l_table(params: SurfaceParams, chi: Character, n_max: int = DEFAULT_N_MAX) -> CoefficientTable:
    return CoefficientTable.build(params, n_max, character=chi.generator_index)


def evaluate_L(s, n: int, params: SurfaceParams, chi: Character, table: CoefficientTable | None = None):
    """Partial sum ``1 + sum_k a_k^chi(s)`` of the twisted zeta function."""
    if table is None:
        table = l_table(params, chi, max(n - n % 2, 0))
    elif table.character != chi.generator_index:
        raise DomainError("table was built for a different character")
    if n > table.n_max:
        raise DomainError(f"n={n} exceeds table n_max={table.n_max}")
    return table.evaluator(n - n % 2)(s)


def _bs(s: complex, table: CoefficientTable, n: int) -> list:
    return [None, 0j] + [b_m(s, table.spectra.get(m), m) for m in range(2, n + 1)]


def cover_coefficients(s: complex, params: SurfaceParams, chi: Character, n: int) -> list[complex]:
    """Coefficients built from ``b_m + b_m^chi``, the expansion of the double cover."""
    z = l_table(params, Character.trivial(), n)
    lt = l_table(params, chi, n)
    bz, bl = _bs(s, z, n), _bs(s, lt, n)
    summed = [None] + [bz[m] + bl[m] for m in range(1, n + 1)]
    return [complex(x) for x in a_from_b(summed, n)]


def product_coefficients(s: complex, params: SurfaceParams, chi: Character, n: int) -> list[complex]:
    """Cauchy product of the untwisted and twisted coefficient sequences, up to order ``n``."""
    a = a_from_b(_bs(s, l_table(params, Character.trivial(), n), n), n)
    al = a_from_b(_bs(s, l_table(params, chi, n), n), n)
    return [complex(sum(a[j] * al[k - j] for j in range(k + 1))) for k in range(n + 1)]


def multiplicativity_residual(s: complex, params: SurfaceParams, chi: Character, n: int = 10) -> float:
    """Largest relative discrepancy between the two coefficient routes."""
    if n % 2:
        raise DomainError("n must be even")
    lhs = np.array(product_coefficients(s, params, chi, n))
    rhs = np.array(cover_coefficients(s, params, chi, n))
    scale = max(1.0, float(np.abs(lhs).max()))
    return float(np.abs(lhs - rhs).max() / scale)


def character_value_admissible(chi: Character, word: Sequence[int]) -> int:
    if not is_admissible(word):
        raise DomainError(f"word {tuple(word)} is not cyclically admissible")
    return chi(word)
