"""Cutting words of the three-letter subshift with no repeated neighbours.

A fixed point of ``sigma**m`` is a cyclic word of length ``m`` over
``{1, 2, 3}`` with no two cyclically adjacent letters equal.  Fixed points
are grouped into rotation orbits; each orbit is stored once, by its
lexicographically smallest rotation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DomainError, ResourceError

__all__ = [
    "OrbitClass",
    "M_CEILING",
    "is_admissible",
    "min_rotation",
    "primitive_period",
    "c_weight",
    "enumerate_fixed_points",
    "count_fixed_points",
    "cweight_histogram",
    "symmetry_key",
]

M_CEILING = 16
SYMBOLS = (1, 2, 3)


@dataclass(frozen=True)
class OrbitClass:
    """A rotation orbit of fixed points of ``sigma**m``.

    Attributes
    ----------
    rep : tuple of int
        Smallest rotation, of length ``m``.
    m : int
        Period as a fixed point of ``sigma**m``.
    p : int
        Primitive period; also the number of distinct rotations.
    cweight : int
        Number of cyclic positions ``j`` with ``rep[j] != rep[j+2]``.
    """

    rep: tuple[int, ...]
    m: int
    p: int
    cweight: int

    @property
    def word(self) -> tuple[int, ...]:
        return self.rep

    @property
    def repetitions(self) -> int:
        return self.m // self.p

    @property
    def primitive(self) -> tuple[int, ...]:
        return self.rep[: self.p]

    def rotations(self) -> Iterator[tuple[int, ...]]:
        for k in range(self.p):
            yield self.rep[k:] + self.rep[:k]


def is_admissible(word: Sequence[int]) -> bool:
    n = len(word)
    if n == 0:
        return False
    return all(word[i] in SYMBOLS and word[i] != word[(i + 1) % n] for i in range(n))


def min_rotation(word: Sequence[int]) -> tuple[int, ...]:
    w = tuple(word)
    return min(w[k:] + w[:k] for k in range(len(w)))


def primitive_period(word: Sequence[int]) -> int:
    w = tuple(word)
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w == w[p:] + w[:p]:
            return p
    return n


def c_weight(word: Sequence[int]) -> int:
    """Count cyclic windows ``(x_j, x_{j+1}, x_{j+2})`` with ``x_j != x_{j+2}``."""
    if not is_admissible(word):
        raise DomainError(f"word {tuple(word)} is not cyclically admissible")
    n = len(word)
    return sum(1 for j in range(n) if word[j] != word[(j + 2) % n])


def _check_m(m: int) -> None:
    if not isinstance(m, int) or m < 2 or m % 2:
        raise DomainError(f"m must be an even integer >= 2, got {m!r}")
    if m > M_CEILING:
        raise ResourceError(f"m={m} exceeds the enumeration ceiling {M_CEILING}")


def _necklaces(m: int) -> Iterator[tuple[int, ...]]:
    """Yield each admissible cyclic word of length ``m`` that is its own smallest rotation."""
    word = [0] * m

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == m:
            if word[-1] != word[0]:
                w = tuple(word)
                if all(w <= w[k:] + w[:k] for k in range(1, m)):
                    yield w
            return
        for a in SYMBOLS:
            if a == word[i - 1]:
                continue
            # a smallest rotation never has a letter below its first letter
            if a < word[0]:
                continue
            word[i] = a
            yield from rec(i + 1)

    for first in SYMBOLS:
        word[0] = first
        yield from rec(1)


def enumerate_fixed_points(m: int) -> list[OrbitClass]:
    """All fixed points of ``sigma**m``, grouped into rotation orbits.

    The orbit sizes ``p`` sum to ``4**(m//2) + 2``.  Output is sorted by
    representative.
    """
    _check_m(m)
    out = []
    for w in _necklaces(m):
        p = primitive_period(w)
        out.append(OrbitClass(rep=w, m=m, p=p, cweight=c_weight(w)))
    return out


def count_fixed_points(m: int) -> int:
    return sum(o.p for o in enumerate_fixed_points(m))


def cweight_histogram(m: int) -> dict[int, int]:
    """Number of fixed points of ``sigma**m`` for each c-weight."""
    hist: Counter[int] = Counter()
    for o in enumerate_fixed_points(m):
        hist[o.cweight] += o.p
    return dict(sorted(hist.items()))


_PERMS = (
    (1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1),
)


def symmetry_key(word: Sequence[int], fixed_letter: int | None = None) -> tuple[int, ...]:
    """Canonical form under rotation, reversal and letter permutations.

    Words with equal keys have equal geodesic lengths.  With
    ``fixed_letter`` only the permutations fixing that letter are used.
    """
    w = tuple(word)
    best = None
    for perm in _PERMS:
        if fixed_letter is not None and perm[fixed_letter - 1] != fixed_letter:
            continue
        pw = tuple(perm[a - 1] for a in w)
        for cand in (pw, pw[::-1]):
            r = min_rotation(cand)
            if best is None or r < best:
                best = r
    return best
