"""Transformed potentials as exact rational functions, bound-state
eigenfunctions, exact well counting, and the regularity certificate."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .exactpoly import (RationalFunction, SturmChain, UniPoly, isolate_roots,
                        poly_gcd, sturm_root_count)
from .hermite import SeedSet, norm_data, seed_wronskians
from .sequences import GapSequence

TWO_PI = 2.0 * math.pi


class RegularityError(ValueError):
    """Raised when a sequence fails the exact regularity certificate."""


class DegenerateCriticalPointError(ArithmeticError):
    """Raised when the potential derivative has a multiple positive root."""


@dataclass(frozen=True)
class RegularityCertificate:
    """Exact admissibility certificate for a gap sequence.

    Passes iff the reduced seed Wronskian has no roots on (0, inf) and the
    origin multiplicity matches l_N(l_N+1)/2.
    """

    sigma: GapSequence
    ord0: int
    expected_ord0: int
    positive_roots: int
    offending_interval: Optional[tuple[float, float]] = None

    @property
    def passed(self) -> bool:
        return self.positive_roots == 0 and self.ord0 == self.expected_ord0

    def describe(self) -> str:
        if self.passed:
            return (f"sigma={self.sigma}: regular on (0,inf); origin order "
                    f"{self.ord0} = l(l+1)/2 with l={self.sigma.l_n}")
        parts = []
        if self.positive_roots:
            where = ""
            if self.offending_interval:
                a, b = self.offending_interval
                where = f", first in ({a:.6g}, {b:.6g}]"
            parts.append(f"{self.positive_roots} positive Wronskian root(s){where}")
        if self.ord0 != self.expected_ord0:
            parts.append(f"origin order {self.ord0} != expected {self.expected_ord0}")
        return f"sigma={self.sigma}: " + "; ".join(parts)


def certify_regular(sigma: GapSequence) -> RegularityCertificate:
    """Sturm-count the positive roots of the reduced seed Wronskian.

    Returns a failing certificate instead of raising, so structurally valid
    but inadmissible sequences can be reported.
    """
    seed = seed_wronskians(sigma)
    reduced = seed.what.shift_down(seed.ord0)
    count = sturm_root_count(reduced, 0, None)
    expected = sigma.l_n * (sigma.l_n + 1) // 2 if sigma.l_n >= 0 else -1
    interval = None
    if count:
        a, b = isolate_roots(reduced, 0, None)[0]
        interval = (float(a), float(b))
    return RegularityCertificate(sigma, seed.ord0, expected, count, interval)


@dataclass(frozen=True)
class PotentialModel:
    """Exact transformed potential x^2/4 + |sigma| - 2 (ln W)'' with its seed."""

    sigma: GapSequence
    v: RationalFunction
    singular_coeff: int
    seed: SeedSet

    @property
    def l_n(self) -> int:
        return self.sigma.l_n

    def v_float(self, x):
        return self.v.eval_float(x)


@lru_cache(maxsize=None)
def _build_potential_cached(elements: tuple[int, ...], sigma: GapSequence) -> PotentialModel:
    cert = certify_regular(sigma)
    if not cert.passed:
        raise RegularityError(cert.describe())
    seed = seed_wronskians(sigma)
    w = seed.what
    log_second = RationalFunction(w.deriv().deriv() * w - w.deriv() * w.deriv(), w * w)
    v = RationalFunction(UniPoly((sigma.size, 0, Fraction(1, 4)))) - log_second * 2

    ord_den = v.den.trailing_order()
    if ord_den == 0:
        coeff = Fraction(0)
    else:
        # Laurent coefficient of 1/x^2 from the canonical form
        if ord_den != 2:
            raise AssertionError(f"unexpected pole order {ord_den} at origin for {sigma}")
        coeff = v.num.eval(0) / v.den.shift_down(2).eval(0)
    if coeff.denominator != 1:
        raise AssertionError(f"non-integer centrifugal coefficient {coeff} for {sigma}")
    return PotentialModel(sigma, v, int(coeff), seed)


def build_potential(sigma: GapSequence) -> PotentialModel:
    """Build the exact potential; raises RegularityError for inadmissible input."""
    return _build_potential_cached(sigma.elements, sigma)


class SpectrumMembershipError(ValueError):
    """Raised for levels outside the transformed bound-state spectrum."""


@dataclass(frozen=True)
class Eigenstate:
    """Normalized bound state: amplitude * exp(-x^2/4) * shape(x)."""

    n: int
    energy: float
    amplitude: float
    shape: RationalFunction

    def psi(self, x):
        return self.amplitude * np.exp(-np.asarray(x, dtype=float) ** 2 / 4.0) \
            * self.shape.eval_float(x)

    def __call__(self, x):
        return self.psi(x)


def eigenfunction(sigma: GapSequence, n: int) -> Eigenstate:
    """Bound state at level n (odd, not a seed level).

    The Gaussian factor is common to all Wronskian entries and is pulled out,
    leaving an exact rational shape; the lone transcendental factor is applied
    at evaluation time.
    """
    model = build_potential(sigma)
    if n % 2 == 0:
        raise SpectrumMembershipError(
            f"level {n}: even oscillator levels are not mapped to square-integrable states")
    if n in sigma.elements:
        raise SpectrumMembershipError(f"level {n} is a seed level of {sigma}")
    nd = norm_data(sigma, n)
    if nd.nsq <= 0:
        raise SpectrumMembershipError(
            f"level {n} of {sigma} has non-positive normalization square {nd.nsq}")
    shape = RationalFunction(model.seed.augmented(n), model.seed.what)
    p_n_sq = 1.0 / (math.factorial(n) * math.sqrt(TWO_PI))
    amplitude = math.sqrt(2.0 * float(nd.nsq) * p_n_sq)
    return Eigenstate(n, n + 0.5, amplitude, shape)


def _dv_numerator(model: PotentialModel) -> tuple[UniPoly, int]:
    """Numerator of V' over the structural denominator W**3.

    V' = x/2 - 2 d/dx[(W''W - W'^2)/W^2]
       = [x W^3 / 2 - 2 (G' W - 2 G W')] / W^3,  G = W''W - W'^2.
    Avoids the large generic-derivative gcd.  Returns the numerator and the
    sign of W (hence of W^3) on (0, inf).
    """
    w = model.seed.what
    g = w.deriv().deriv() * w - w.deriv() * w.deriv()
    num = UniPoly((0, Fraction(1, 2))) * w * w * w - (g.deriv() * w - g * w.deriv() * 2) * 2
    # W = w_lead * x^ord0 * (positive factor) on (0, inf), so sign(W) there
    # is the sign of the reduced polynomial at any positive sample; use lead.
    den_sign = 1 if w.lead > 0 else -1
    return num, den_sign


def count_wells(model: PotentialModel) -> int:
    """Exact number of local minima of V on (0, inf).

    Critical points are the positive roots of the derivative numerator (the
    denominator W^3 keeps one sign there); each root is classified by exact
    sign evaluation at rational points between Sturm-isolated roots.
    """
    num, den_sign = _dv_numerator(model)
    red = num.shift_down(num.trailing_order())

    g = poly_gcd(red, red.deriv())
    if g.degree > 0 and sturm_root_count(g, 0, None) > 0:
        raise DegenerateCriticalPointError(
            f"V' for {model.sigma} has a multiple positive root; minima are ill-defined")

    chain = SturmChain(red)
    brackets = chain.isolate(0, None)
    if not brackets:
        return 0

    samples: list[Fraction] = []
    for a, b in brackets:
        # point strictly between the previous root and the one in (a, b]:
        # (prev_root, a] is root-free, so a itself works unless it sits on
        # the previous root or at the domain edge; then shrink inward.
        if a > 0 and red.eval(a) != 0:
            pt = a
        else:
            c = b
            while True:
                c = (a + c) / 2
                if chain.count(a, c) == 0 and red.eval(c) != 0:
                    pt = c
                    break
        samples.append(pt)
    samples.append(brackets[-1][1] + 1)  # beyond the last root, never a root

    signs = [den_sign * (1 if red.eval(p) > 0 else -1) for p in samples]
    return sum(1 for a, b in zip(signs, signs[1:]) if a < 0 < b)


def susy_check(sigma: GapSequence, n: int, lo: float = 0.5, hi: float = 4.0,
               step: float = 1e-3) -> float:
    """Finite-difference witness of the intertwining relation.

    Applies the transformed Hamiltonian to the mapped eigenfunction on an
    interior grid and returns max |H psi - E psi| / (E * max|psi|).
    """
    if lo <= 0:
        raise ValueError("grid must stay inside (0, inf)")
    model = build_potential(sigma)
    state = eigenfunction(sigma, n)
    x = np.arange(lo, hi, step)
    psi = state.psi(x)
    lap = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) / step**2
    h_psi = -lap + model.v_float(x[1:-1]) * psi[1:-1]
    resid = np.abs(h_psi - state.energy * psi[1:-1])
    return float(resid.max() / (state.energy * np.abs(psi).max()))
