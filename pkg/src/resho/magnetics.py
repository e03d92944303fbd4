"""Inversion of radial potentials into axially symmetric magnetic-field
profiles carrying a fractional flux line.

Units: hbar = 1, m = 1/2; charge factors are absorbed into the azimuthal
profile f_2.  The positive square-root branch is used throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactpoly import RationalFunction, UniPoly, isolate_roots, sturm_root_count
from .spectralmodel import PotentialModel

HALF = Fraction(1, 2)


class PositivityError(ValueError):
    """Raised when the square-root argument is not positive on (0, inf)."""


def _as_fraction(v) -> Fraction:
    # Fraction(float) is exact; decimal strings like "0.5" parse exactly too
    return v if isinstance(v, Fraction) else Fraction(v)


def solve_l_s(singular_coeff: int) -> int:
    """Nonnegative integer l with l(l+1) equal to the centrifugal coefficient."""
    l = int((math.isqrt(1 + 4 * singular_coeff) - 1) // 2)
    if l * (l + 1) != singular_coeff:
        raise ValueError(f"{singular_coeff} is not of the form l(l+1)")
    return l


@dataclass(frozen=True, eq=False)
class FieldProfile:
    """Azimuthal potential profile f_2 and axial field B_z for one potential.

    `s` is the exact radicand 1 + 4 rho^2 (V + E_reg); `numer` is the exact
    field numerator 2 E_reg + 2 V + rho V', in which the inverse-square poles
    cancel identically, so the axis value bz0 is finite and exactly rational.
    """

    model: PotentialModel
    l: int
    mu: Fraction
    e_reg: Fraction
    s: RationalFunction
    numer: RationalFunction
    s0: Fraction
    bz0: Fraction
    f20: Fraction

    def f2(self, rho):
        rho = np.asarray(rho, dtype=float)
        return float(self.l + self.mu) + 0.5 * np.sqrt(self.s.eval_float(rho))

    def bz(self, rho):
        rho = np.asarray(rho, dtype=float)
        return self.numer.eval_float(rho) / np.sqrt(self.s.eval_float(rho))


def build_field(model: PotentialModel, l: int | None = None,
                mu=HALF, e_reg=0) -> FieldProfile:
    """Field profile generating the model potential in the sector with angular
    momentum l (default: the integer matching the centrifugal coefficient).

    Raises PositivityError when E_reg leaves the radicand non-positive
    somewhere on (0, inf).
    """
    mu = _as_fraction(mu)
    e_reg = _as_fraction(e_reg)
    if l is None:
        l = solve_l_s(model.singular_coeff)

    x2 = RationalFunction(UniPoly((0, 0, 4)))
    s = (model.v + e_reg) * x2 + 1
    v_prime = model.v.deriv()
    numer = model.v * 2 + v_prime * RationalFunction(UniPoly((0, 1))) + 2 * e_reg

    _certify_positive(s, model, e_reg)
    if numer.den.eval(0) == 0:
        raise AssertionError("field numerator kept an origin pole; cancellation failed")

    s0 = s.eval(0)
    root = _exact_sqrt(s0)
    bz0 = numer.eval(0) / root
    f20 = l + mu + root / 2
    return FieldProfile(model, l, mu, e_reg, s, numer, s0, bz0, f20)


def _exact_sqrt(q: Fraction) -> Fraction:
    n = math.isqrt(q.numerator)
    d = math.isqrt(q.denominator)
    if n * n != q.numerator or d * d != q.denominator:
        raise AssertionError(f"radicand {q} at the axis is not a perfect square")
    return Fraction(n, d)


def _certify_positive(s: RationalFunction, model: PotentialModel, e_reg: Fraction) -> None:
    num = s.num
    red = num.shift_down(num.trailing_order())
    if sturm_root_count(red, 0, None) > 0:
        a, b = isolate_roots(red, 0, None)[0]
        raise PositivityError(
            f"E_reg={e_reg} violates positivity of the square-root argument for "
            f"{model.sigma}: zero crossing in ({float(a):.6g}, {float(b):.6g}]")
    # no positive roots: the sign anywhere on (0, inf) is the sign at +inf
    if red.lead < 0 or s.eval(1) <= 0:
        raise PositivityError(
            f"E_reg={e_reg} makes the square-root argument negative on (0, inf) "
            f"for {model.sigma}")


def forward_check(profile: FieldProfile) -> RationalFunction:
    """Reconstruct the potential from the profile: ((f_2 - l - mu)^2 - 1/4)/rho^2.

    With f_2 - l - mu = sqrt(S)/2 this is exactly (S - 1)/(4 rho^2), an
    identity in exact arithmetic; the caller compares with V + E_reg.
    """
    inv_4x2 = RationalFunction(UniPoly((1,)), UniPoly((0, 0, 4)))
    return (profile.s - 1) * inv_4x2


@dataclass(frozen=True)
class SingularityReport:
    """How the potential's centrifugal strength embeds in cylindrical geometry."""

    singular_coeff: int
    l_s: int
    l_c: Fraction
    l: int
    mu: Fraction
    coefficient: Fraction
    residual: Fraction

    @property
    def matched(self) -> bool:
        return self.residual == 0


def singularity_match_report(model: PotentialModel, l: int | None = None,
                             mu=HALF) -> SingularityReport:
    """Compare (l + mu)^2 - 1/4 against the model's centrifugal coefficient.

    With mu = 1/2 the integer l = l_s reproduces l_s(l_s + 1) exactly; any
    other combination is reported with its residual.
    """
    mu = _as_fraction(mu)
    l_s = solve_l_s(model.singular_coeff)
    if l is None:
        l = l_s
    coeff = (l + mu) ** 2 - Fraction(1, 4)
    return SingularityReport(
        singular_coeff=model.singular_coeff,
        l_s=l_s,
        l_c=l_s + HALF,
        l=l,
        mu=mu,
        coefficient=coeff,
        residual=coeff - model.singular_coeff,
    )
