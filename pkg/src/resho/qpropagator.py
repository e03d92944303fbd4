"""Closed-form propagators: exact recursion for the bivariate coefficient
tables, the oscillator kernel, the formal singular kernel, and the reflected
half-line combination.

Rescaling note: the textbook recursion carries a power of (2*pi)**(-1/2) per
seed level through the continuum normalization.  The stored tables R_k drop
that power (R_k is the rescaled coefficient polynomial), which keeps every
entry exactly rational; only the ratio of exponential-weighted sums enters
the kernel, where the power cancels together with the factorization constant.
The cancellation is re-verified at build time by the product factorization
check below.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactpoly import BiPoly, UniPoly
from .hermite import he, norm_data, seed_wronskians
from .sequences import GapSequence
from .spectralmodel import RegularityError, certify_regular

SIN_FLOOR = 1e-9


class TimeDomainError(ValueError):
    """Raised for times outside the supported strip or too close to a caustic."""


@dataclass(frozen=True)
class ComplexTime:
    """Complexified time with Im(t) <= 0, bounded away from the caustics t = k*pi."""

    value: complex
    floor: float = SIN_FLOOR

    def __post_init__(self):
        t = complex(self.value)
        if t.imag > 0:
            raise TimeDomainError(f"time {t}: Im(t) must be <= 0")
        if abs(cmath.sin(t)) <= self.floor:
            raise TimeDomainError(
                f"time {t}: |sin t| <= {self.floor}, too close to a caustic t = k*pi")
        object.__setattr__(self, "value", t)

    @classmethod
    def coerce(cls, t) -> "ComplexTime":
        return t if isinstance(t, ComplexTime) else cls(complex(t))


def _check_strip(t: complex) -> complex:
    # principal-branch prefactor is continuous only within one caustic cell
    if not (0.0 <= t.real < math.pi):
        raise TimeDomainError(
            f"time {t}: Re(t) must lie in [0, pi); continuation across caustics "
            "(Maslov phase tracking) is unsupported")
    return t


def k_osc(x: float, y: float, t) -> complex:
    """Harmonic-oscillator kernel (4*pi*i*sin t)**(-1/2) * exp[i((x^2+y^2)cos t - 2xy)/(4 sin t)].

    Principal branch; Re(t) restricted to one caustic cell [0, pi).
    """
    tv = _check_strip(ComplexTime.coerce(t).value)
    s = cmath.sin(tv)
    c = cmath.cos(tv)
    pref = 1.0 / cmath.sqrt(4j * math.pi * s)
    return pref * cmath.exp(1j * ((x * x + y * y) * c - 2.0 * x * y) / (4.0 * s))


def _k_osc_array(x: float, y: np.ndarray, t: complex) -> np.ndarray:
    s = cmath.sin(t)
    c = cmath.cos(t)
    pref = 1.0 / cmath.sqrt(4j * math.pi * s)
    return pref * np.exp(1j * ((x * x + y * y) * c - 2.0 * x * y) / (4.0 * s))


@dataclass(frozen=True)
class QTable:
    """Exact rescaled coefficient tables R_0..R_{last+1} with their factored sum.

    sum(R_k) factors exactly as c * What(x) * What(y); the constant c is kept
    for the record but cancels from every kernel ratio.
    """

    sigma: GapSequence
    r: tuple[BiPoly, ...]
    sum_r: BiPoly
    c: Fraction
    what: UniPoly


class QTableConsistencyError(RuntimeError):
    """Internal factorization failure: signals an implementation bug."""


@lru_cache(maxsize=None)
def _build_qtable_cached(elements: tuple[int, ...], sigma: GapSequence) -> QTable:
    cert = certify_regular(sigma)
    if not cert.passed:
        raise RegularityError(cert.describe())
    seed = seed_wronskians(sigma)
    last = sigma.last
    seed.precompute(last + 1)

    tables: list[BiPoly] = []
    for k in range(last + 2):
        nd = norm_data(sigma, k)
        if nd.a_k == 0:
            head = BiPoly()
        else:
            wk = seed.augmented(k)
            head = BiPoly.outer(wk, wk).scale(nd.a_k)
        acc = head
        for j in range(1, k + 1):
            hj = he(j)
            acc = acc - (tables[k - j] * BiPoly.outer(hj, hj)).scale(Fraction(1, math.factorial(j)))
        if not acc.is_symmetric():
            raise QTableConsistencyError(f"R_{k} for {sigma} is not symmetric in x, y")
        tables.append(acc)

    sum_r = BiPoly()
    for tab in tables:
        sum_r = sum_r + tab
    product = BiPoly.outer(seed.what, seed.what)
    key = max(product.terms)  # highest bidegree, coefficient = lead(What)^2
    if key not in sum_r.terms:
        raise QTableConsistencyError(
            f"sum of tables for {sigma} misses the top Wronskian-product term")
    c = sum_r.terms[key] / product.terms[key]
    if sum_r != product.scale(c):
        raise QTableConsistencyError(
            f"sum of tables for {sigma} does not factor as c*W(x)*W(y)")
    return QTable(sigma, tuple(tables), sum_r, c, seed.what)


def build_qtable(sigma: GapSequence) -> QTable:
    """Exact table family for a gap sequence (cached; admissibility enforced)."""
    return _build_qtable_cached(sigma.elements, sigma)


class PropagatorModel:
    """Numeric evaluator for the closed-form half-line propagator.

    Holds dense float coefficient grids for each table; built once, then all
    evaluation is pure and thread-safe.
    """

    def __init__(self, qtable: QTable):
        self.qtable = qtable
        self.sigma = qtable.sigma
        self.l_n = qtable.sigma.l_n
        self._coeff_grids = [np.array(t.dense_float()) for t in qtable.r]
        self._w_coeffs = np.array(qtable.what.float_coeffs())
        self._c = float(qtable.c)
        self._dx = max(g.shape[0] for g in self._coeff_grids) - 1
        self._verify_evaluator()

    @classmethod
    def for_sigma(cls, sigma: GapSequence) -> "PropagatorModel":
        return _model_cache(sigma.elements, sigma)

    # -- exactness cross-check -----------------------------------------
    def _verify_evaluator(self, rel_tol: float = 1e-14) -> None:
        # fixed rational probe points; floats of small rationals are exact
        probes = [(Fraction(1, 2), Fraction(3, 4)), (Fraction(5, 4), Fraction(1, 8)),
                  (Fraction(2, 1), Fraction(3, 2))]
        for xq, yq in probes:
            vals = self._table_values(float(xq), np.array([float(yq)]))
            for k, tab in enumerate(self.qtable.r):
                exact = float(tab.eval(xq, yq))
                got = float(vals[k, 0])
                scale = max(abs(exact), 1.0)
                if abs(got - exact) > rel_tol * scale:
                    raise QTableConsistencyError(
                        f"float evaluator drifted from exact table R_{k} at ({xq},{yq})")

    # -- evaluation ------------------------------------------------------
    def _w_at(self, v) -> np.ndarray | float:
        acc = 0.0 * v
        for cf in self._w_coeffs[::-1]:
            acc = acc * v + cf
        return acc

    def _table_values(self, x: float, y: np.ndarray) -> np.ndarray:
        """Values R_k(x, y) for all k; shape (n_tables, len(y))."""
        ypow = np.vander(y, N=max(g.shape[1] for g in self._coeff_grids), increasing=True).T
        xpow = np.power(x, np.arange(self._dx + 1))
        out = np.empty((len(self._coeff_grids), y.size))
        for k, grid in enumerate(self._coeff_grids):
            row = xpow[: grid.shape[0]] @ grid
            out[k] = row @ ypow[: grid.shape[1]]
        return out

    def _ratio(self, x: float, y: np.ndarray, t: complex) -> np.ndarray:
        """(sum_k R_k e^{-ikt}) / (c W(x) W(y)); caller keeps x, y off the nodes of W."""
        vals = self._table_values(x, y)
        phases = np.exp(-1j * t * np.arange(len(self._coeff_grids)))
        num = phases @ vals
        den = self._c * self._w_at(x) * self._w_at(y)
        return num / den

    def k_formal(self, x: float, y: float, t) -> complex:
        """Formal kernel K_osc * ratio; singular where the seed Wronskian vanishes."""
        tv = _check_strip(ComplexTime.coerce(t).value)
        wx, wy = self._w_at(x), self._w_at(y)
        if wx == 0.0 or wy == 0.0:
            raise ZeroDivisionError(
                f"formal kernel of {self.sigma} is singular at x={x}, y={y} "
                "(seed Wronskian zero); use the reflected combination")
        return complex(_k_osc_array(x, np.array([y]), tv)[0]
                       * self._ratio(x, np.array([y]), tv)[0])

    def propagator(self, x: float, y: float, t) -> complex:
        """Half-line kernel K(x, y; t) with K(0, y; t) = 0 enforced exactly.

        At x = 0 the two reflected terms cancel identically (the transformation
        operator has parity (-1)**l_N), so 0 is returned without touching the
        singular ratio.
        """
        if y <= 0.0:
            raise ValueError("propagator requires y > 0")
        if x < 0.0:
            raise ValueError("propagator requires x >= 0")
        tv = _check_strip(ComplexTime.coerce(t).value)
        if x == 0.0:
            return 0.0 + 0.0j
        return complex(self.eval_grid(x, np.array([y]), tv)[0])

    def eval_grid(self, x: float, y: np.ndarray, t) -> np.ndarray:
        """Vectorized K(x, y_i; t) over a positive y array."""
        tv = _check_strip(ComplexTime.coerce(t).value)
        y = np.asarray(y, dtype=float)
        if x == 0.0:
            return np.zeros(y.shape, dtype=complex)
        direct = _k_osc_array(x, y, tv) * self._ratio(x, y, tv)
        mirror = _k_osc_array(-x, y, tv) * self._ratio(-x, y, tv)
        sign = -1.0 if self.l_n % 2 == 0 else 1.0
        return direct + sign * mirror


@lru_cache(maxsize=None)
def _model_cache(elements: tuple[int, ...], sigma: GapSequence) -> PropagatorModel:
    return PropagatorModel(build_qtable(sigma))


def k_formal(sigma: GapSequence, x: float, y: float, t) -> complex:
    """Formal (unreflected) kernel for a gap sequence."""
    return PropagatorModel.for_sigma(sigma).k_formal(x, y, t)


def propagator(sigma: GapSequence, x: float, y: float, t) -> complex:
    """Half-line propagator for a gap sequence (see PropagatorModel.propagator)."""
    return PropagatorModel.for_sigma(sigma).propagator(x, y, t)
