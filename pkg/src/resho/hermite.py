"""Probabilistic Hermite polynomials, seed Wronskians, and exact normalization
products.

Everything here is exact rational data.  The irrational factor (2*pi)**(-1/2)
carried by the continuum normalization only ever enters through squares and
pairwise products, and it cancels in every exposed quantity; see the
rescaling note in :mod:`resho.qpropagator`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactpoly import UniPoly, wronskian
from .sequences import GapSequence

DEFAULT_MAX_LEVEL = 64


class HermiteTable:
    """Memoized He_0..He_max via the three-term recurrence.

    Populate up-front (or guard externally) before sharing across threads.
    """

    def __init__(self, max_n: int = DEFAULT_MAX_LEVEL):
        self.max_n = max_n
        self._polys = [UniPoly((1,)), UniPoly((0, 1))]

    def he(self, n: int) -> UniPoly:
        if n < 0:
            raise ValueError("Hermite index must be nonnegative")
        if n > self.max_n:
            raise ValueError(f"Hermite index {n} exceeds configured max {self.max_n}")
        polys = self._polys
        while len(polys) <= n:
            k = len(polys) - 1
            polys.append(UniPoly((0, 1)) * polys[k] - polys[k - 1].scale(k))
        return polys[n]


_TABLE = HermiteTable()


def he(n: int) -> UniPoly:
    """Probabilists' Hermite polynomial He_n (exact coefficients)."""
    return _TABLE.he(n)


class SeedSet:
    """Seed Wronskian data for a gap sequence.

    `what` is Wr[He_sigma]; `ord0` its root multiplicity at the origin;
    augmented Wronskians Wr[He_sigma + He_n] are memoized per level.
    """

    def __init__(self, sigma: GapSequence, what: UniPoly, ord0: int, parity: int):
        self.sigma = sigma
        self.what = what
        self.ord0 = ord0
        self.parity = parity
        self._aug: dict[int, UniPoly] = {}

    def augmented(self, n: int) -> UniPoly:
        """Wr[He_sigma + He_n]; the zero polynomial when n is a seed level."""
        cached = self._aug.get(n)
        if cached is None:
            if n in self.sigma.elements:
                cached = UniPoly()
            else:
                polys = [he(m) for m in self.sigma.elements] + [he(n)]
                cached = wronskian(polys)
            self._aug[n] = cached
        return cached

    def precompute(self, n_max: int) -> None:
        for n in range(n_max + 1):
            self.augmented(n)


@lru_cache(maxsize=None)
def _seed_for(elements: tuple[int, ...]) -> tuple[UniPoly, int, int]:
    what = wronskian([he(m) for m in elements])
    if what.is_zero:
        raise AssertionError("seed Wronskian of distinct levels vanished")
    return what, what.trailing_order(), what.parity()


def seed_wronskians(sigma: GapSequence) -> SeedSet:
    """Seed Wronskian with exact origin order and parity.

    The polynomial has definite parity because every He_n does; `ord0` equals
    l_N(l_N+1)/2 exactly for admissible sequences (checked downstream by the
    regularity certificate, not assumed here).
    """
    what, ord0, parity = _seed_for(sigma.elements)
    if parity == 0:
        raise AssertionError(f"seed Wronskian for {sigma} lost definite parity")
    return SeedSet(sigma, what, ord0, parity)


@dataclass(frozen=True)
class NormalizationData:
    """Exact normalization products for one oscillator level.

    `nsq` is the signed square of the transformation normalization,
    prod_j (n - sigma_j)**(-1), zero when n is a seed level.  `a_k` is the
    rescaled head coefficient of the propagator recursion,
    nsq * prod_{m in sigma} (1/m!) * (1/n!).
    """

    n: int
    nsq: Fraction
    a_k: Fraction
    physical: bool


def sigma_factorial_product(sigma: GapSequence) -> int:
    out = 1
    for m in sigma.elements:
        out *= math.factorial(m)
    return out


def norm_data(sigma: GapSequence, n: int) -> NormalizationData:
    if n in sigma.elements:
        return NormalizationData(n, Fraction(0), Fraction(0), physical=False)
    prod = 1
    for m in sigma.elements:
        prod *= n - m
    nsq = Fraction(1, prod)
    a_k = nsq / (sigma_factorial_product(sigma) * math.factorial(n))
    physical = n % 2 == 1 and nsq > 0
    return NormalizationData(n, nsq, a_k, physical)
