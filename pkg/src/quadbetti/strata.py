"""Closed-form facts about the corank strata of symmetric matrices.

``Z^(r)`` is the set of symmetric matrices with kernel of dimension at
least ``r``.  It has codimension ``r(r+1)/2`` and its singular locus is
``Z^(r+1)``.  Only counts are computed here; nothing symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Tuple

from .errors import InputError


@dataclass(frozen=True)
class StratumDescriptor:
    r: int
    codim: int
    empty_for_k: int  # the stratum misses a generic k-dimensional span for k <= this

    @classmethod
    def of(cls, r: int) -> "StratumDescriptor":
        c = codim(r)
        return cls(r, c, c)


@dataclass(frozen=True)
class IntervalFamily:
    r: int
    l: int
    intervals: Tuple[Tuple[int, ...], ...]


def codim(r: int) -> int:
    if r < 0:
        raise InputError("corank must be nonnegative")
    return r * (r + 1) // 2


def sigma_k(k: int) -> int:
    """Largest ``r`` with ``r(r+1)/2 < k``: strata of higher corank are empty."""
    if k < 1:
        raise InputError("k must be at least 1")
    r = 0
    while codim(r + 1) < k:
        r += 1
    return r


def grassmannian_betti(j: int, n: int) -> int:
    if not 0 <= j <= n:
        raise InputError(f"Gr({j},{n}) needs 0 <= j <= n")
    return comb(n, j)


def discriminant_betti(n: int) -> int:
    """Total Z/2 Betti number of the unit-norm singular symmetric n x n matrices.

    Summed over the Grassmannians ``Gr(j, n)`` and checked against ``2**n``.
    """
    if n < 1:
        raise InputError("n must be at least 1")
    total = sum(grassmannian_betti(j, n) for j in range(n + 1))
    assert total == 2 ** n
    return total


def harris_tu_degree(r: int, n: int) -> int:
    """Degree of the complex variety of n x n symmetric matrices of corank >= r."""
    if not 1 <= r <= n:
        raise InputError(f"need 1 <= r <= n, got r={r}, n={n}")
    deg = Fraction(1)
    for a in range(r):
        deg *= Fraction(comb(n + a, r - a), comb(2 * a + 1, a))
    if deg.denominator != 1:
        raise ArithmeticError(f"non-integral degree {deg} for r={r}, n={n}")
    return deg.numerator


def stratum_decomposition(r: int, l: int) -> IntervalFamily:
    """All runs of ``r`` consecutive integers in ``{0, ..., l-1}``."""
    if r < 1:
        raise InputError("r must be at least 1")
    runs = tuple(tuple(range(s, s + r)) for s in range(l - r + 1)) if r <= l else ()
    return IntervalFamily(r, l, runs)
