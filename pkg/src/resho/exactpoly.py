"""Exact rational polynomial arithmetic: univariate/bivariate polynomials over
Fraction, fraction-free Wronskian determinants, Sturm-sequence root counting,
and canonical rational functions.

All values are immutable after construction and safe to share between threads.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class ExactDivisionError(ArithmeticError):
    """Raised when a division that must be exact leaves a remainder."""


def _frac(v: Scalar) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


class UniPoly:
    """Dense univariate polynomial with Fraction coefficients, ascending degree.

    Trailing zero coefficients are trimmed; the zero polynomial has an empty
    coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c: Scalar) -> "UniPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> "UniPoly":
        return cls((0,) * degree + (c,))

    # -- structure ----------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    @property
    def lead(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return self.coeffs[-1]

    def trailing_order(self) -> int:
        """Multiplicity of the root at 0 (0 for the zero polynomial)."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return 0

    def shift_down(self, k: int) -> "UniPoly":
        """Exact division by x**k."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise ExactDivisionError("polynomial not divisible by x**%d" % k)
        return UniPoly(self.coeffs[k:])

    # -- ring operations ----------------------------------------------
    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: Union["UniPoly", Scalar]) -> "UniPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return UniPoly(out)

    def __rmul__(self, other: Scalar) -> "UniPoly":
        return self.scale(other)

    def scale(self, c: Scalar) -> "UniPoly":
        c = _frac(c)
        if c == 0:
            return UniPoly()
        return UniPoly(tuple(c * a for a in self.coeffs))

    def deriv(self) -> "UniPoly":
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def reflect(self) -> "UniPoly":
        """Substitute x -> -x."""
        return UniPoly(tuple(-c if i % 2 else c for i, c in enumerate(self.coeffs)))

    def parity(self) -> int:
        """+1 for even, -1 for odd, 0 for mixed parity (zero counts as even)."""
        if self.reflect() == self:
            return 1
        if self.reflect() == -self:
            return -1
        return 0

    # -- division -----------------------------------------------------
    def __divmod__(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.lead
        q = [Fraction(0)] * max(0, len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            f = c / lead
            q[i - d] = f
            for j, oc in enumerate(other.coeffs):
                rem[i - d + j] -= f * oc
        return UniPoly(q), UniPoly(rem)

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ExactDivisionError("inexact polynomial division")
        return q

    # -- evaluation ---------------------------------------------------
    def eval(self, v: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def eval_float(self, v):
        """Horner evaluation with float coefficients; elementwise on arrays."""
        acc = 0.0 * v
        for c in reversed(self.float_coeffs()):
            acc = acc * v + c
        return acc

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    # -- serialization ------------------------------------------------
    def to_strings(self) -> list[str]:
        """Coefficients as num/den decimal strings, ascending degree."""
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "UniPoly":
        return cls(tuple(Fraction(s) for s in items))

    # -- misc ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*x" if abs(c) != 1 else ("-x" if c < 0 else "x"))
            else:
                parts.append(f"{c}*x^{i}" if abs(c) != 1 else (f"-x^{i}" if c < 0 else f"x^{i}"))
        return " + ".join(parts).replace("+ -", "- ")


ZERO = UniPoly()
ONE = UniPoly((1,))
X = UniPoly((0, 1))


# ---------------------------------------------------------------------------
# integer helpers for gcd / Sturm chains
# ---------------------------------------------------------------------------

def _int_coeffs(p: UniPoly) -> list[int]:
    """Primitive integer coefficient list (positive content removed)."""
    if p.is_zero:
        return []
    den_lcm = 1
    for c in p.coeffs:
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in p.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints]


def _trim(cs: list[int]) -> list[int]:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _primitive(cs: list[int]) -> list[int]:
    g = 0
    for c in cs:
        g = math.gcd(g, c)
    return [c // g for c in cs] if g > 1 else cs


def _pseudo_rem(f: list[int], g: list[int]) -> tuple[list[int], int]:
    """Pseudo-remainder of f by g over the integers.

    Returns (r, m_sign) with lead(g)**(deg f - deg g + 1) * f = q*g + r;
    m_sign is the sign of that multiplier.
    """
    df, dg = len(f) - 1, len(g) - 1
    lg = g[-1]
    r = list(f)
    steps = df - dg + 1
    for i in range(df, dg - 1, -1):
        c = r[i]
        r = [lg * v for v in r]
        # after scaling, eliminate the degree-i term exactly
        for j in range(dg + 1):
            r[i - dg + j] -= c * g[j]
        steps -= 1
    if steps > 0:
        m = lg ** steps
        r = [m * v for v in r]
        steps = 0
    full_mult_sign = 1 if lg > 0 else (1 if (df - dg + 1) % 2 == 0 else -1)
    return _trim(r), full_mult_sign


def _int_eval_sign(cs: list[int], q: Fraction) -> int:
    """Exact sign of the polynomial at a rational point.

    Evaluates the homogenization p(a/b) * b**deg with integer arithmetic only;
    the sign is unchanged because Fraction denominators are positive.
    """
    a, b = q.numerator, q.denominator
    acc = 0
    bp = 1
    for c in reversed(cs):
        acc = acc * a + c * bp
        bp *= b
    return (acc > 0) - (acc < 0)


def _sign_seq_at(chain: list[list[int]], q: Fraction) -> list[int]:
    return [_int_eval_sign(cs, q) for cs in chain]


def _sign_seq_at_inf(chain: list[list[int]]) -> list[int]:
    return [(1 if cs[-1] > 0 else -1) for cs in chain]


def _variations(signs: Iterable[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a * b < 0)


def _sturm_chain(cs: list[int]) -> list[list[int]]:
    """Sturm chain of a squarefree integer polynomial.

    Chain elements are scaled by positive constants only, which preserves
    all sign-variation counts.
    """
    p0 = _primitive(list(cs))
    p1 = _primitive(_trim([i * c for i, c in enumerate(p0)][1:]))
    chain = [p0]
    if not p1:
        return chain
    chain.append(p1)
    while True:
        f, g = chain[-2], chain[-1]
        if len(g) - 1 <= 0:
            break
        r, msign = _pseudo_rem(f, g)
        if not r:
            break
        nxt = [-msign * c for c in r]
        chain.append(_primitive(nxt))
    return chain


def _int_gcd_poly(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd of integer polynomials via the primitive Euclidean chain."""
    f, g = list(a), list(b)
    if len(f) < len(g):
        f, g = g, f
    while g:
        r, _ = _pseudo_rem(f, g)
        f, g = g, _primitive(r) if r else []
    return _primitive(f)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd of two polynomials (1 if coprime; zero inputs handled)."""
    if a.is_zero:
        g = b
    elif b.is_zero:
        g = a
    else:
        ic = _int_gcd_poly(_int_coeffs(a), _int_coeffs(b))
        g = UniPoly(ic)
    if g.is_zero:
        return ZERO
    return g.scale(1 / g.lead)


def squarefree_part(p: UniPoly) -> UniPoly:
    """p divided by gcd(p, p'), normalized monic."""
    if p.is_zero:
        raise ValueError("zero polynomial has no squarefree part")
    g = poly_gcd(p, p.deriv())
    q = p.exact_div(g)
    return q.scale(1 / q.lead)


def cauchy_root_bound(p: UniPoly) -> Fraction:
    """Upper bound for the absolute value of all real roots."""
    if p.degree < 1:
        return Fraction(1)
    lead = abs(p.lead)
    m = max((abs(c) for c in p.coeffs[:-1]), default=Fraction(0))
    return Fraction(1) + m / lead


class SturmChain:
    """Sturm chain of the squarefree part of a polynomial.

    Counts and isolates distinct real roots with exact integer sign
    evaluations; build once, query many times.
    """

    def __init__(self, p: UniPoly):
        if p.is_zero:
            raise ValueError("Sturm chain requires a nonzero polynomial")
        self.squarefree = squarefree_part(p)
        self._chain = (_sturm_chain(_int_coeffs(self.squarefree))
                       if self.squarefree.degree > 0 else [])

    def variations_at(self, q: Scalar) -> int:
        return _variations(_sign_seq_at(self._chain, _frac(q)))

    def variations_at_inf(self) -> int:
        return _variations(_sign_seq_at_inf(self._chain))

    def count(self, lo: Scalar = 0, hi: Scalar | None = None) -> int:
        """Distinct roots in (lo, hi]; hi=None means +infinity."""
        if not self._chain:
            return 0
        v_hi = self.variations_at_inf() if hi is None else self.variations_at(hi)
        return self.variations_at(lo) - v_hi

    def isolate(self, lo: Scalar = 0, hi: Scalar | None = None) -> list[tuple[Fraction, Fraction]]:
        """Disjoint rational brackets (a, b], one distinct root each."""
        if not self._chain:
            return []
        lo = _frac(lo)
        hi = _frac(hi) if hi is not None else max(lo + 1, cauchy_root_bound(self.squarefree))
        out: list[tuple[Fraction, Fraction]] = []
        stack = [(lo, hi, self.count(lo, hi))]
        while stack:
            a, b, n = stack.pop()
            if n <= 0:
                continue
            if n == 1:
                out.append((a, b))
                continue
            m = (a + b) / 2
            nl = self.count(a, m)
            stack.append((a, m, nl))
            stack.append((m, b, n - nl))
        return sorted(out)


def sturm_root_count(p: UniPoly, lo: Scalar = 0, hi: Scalar | None = None) -> int:
    """Number of distinct real roots of p in (lo, hi]; hi=None means +infinity.

    Endpoint signs are evaluated exactly over the integers; the +infinity
    endpoint uses leading-coefficient signs.
    """
    return SturmChain(p).count(lo, hi)


def isolate_roots(p: UniPoly, lo: Scalar = 0, hi: Scalar | None = None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational brackets (a, b], each containing exactly one distinct
    root of p in (lo, hi]; hi=None uses the Cauchy bound."""
    return SturmChain(p).isolate(lo, hi)


# ---------------------------------------------------------------------------
# bivariate polynomials
# ---------------------------------------------------------------------------

class BiPoly:
    """Sparse bivariate polynomial: {(deg_x, deg_y): Fraction}, no stored zeros."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Scalar] | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            fv = _frac(v)
            if fv != 0:
                clean[(int(k[0]), int(k[1]))] = fv
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    @classmethod
    def outer(cls, u: UniPoly, v: UniPoly) -> "BiPoly":
        """u(x) * v(y) as a bivariate polynomial."""
        terms = {}
        for i, cu in enumerate(u.coeffs):
            if cu == 0:
                continue
            for j, cv in enumerate(v.coeffs):
                if cv != 0:
                    terms[(i, j)] = cu * cv
        return cls(terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> tuple[int, int]:
        if not self.terms:
            return (-1, -1)
        return (max(i for i, _ in self.terms), max(j for _, j in self.terms))

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return BiPoly(out)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self.terms.items()})

    def __mul__(self, other: Union["BiPoly", Scalar]) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), v1 in self.terms.items():
            for (i2, j2), v2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + v1 * v2
        return BiPoly(out)

    def __rmul__(self, other: Scalar) -> "BiPoly":
        return self.scale(other)

    def scale(self, c: Scalar) -> "BiPoly":
        c = _frac(c)
        if c == 0:
            return BiPoly()
        return BiPoly({k: c * v for k, v in self.terms.items()})

    def swap_vars(self) -> "BiPoly":
        return BiPoly({(j, i): v for (i, j), v in self.terms.items()})

    def is_symmetric(self) -> bool:
        return self.swap_vars() == self

    def negate_x(self) -> "BiPoly":
        """Substitute x -> -x."""
        return BiPoly({k: (-v if k[0] % 2 else v) for k, v in self.terms.items()})

    def eval(self, xv: Scalar, yv: Scalar) -> Fraction:
        xv, yv = _frac(xv), _frac(yv)
        acc = Fraction(0)
        for (i, j), v in self.terms.items():
            acc += v * xv**i * yv**j
        return acc

    def dense_float(self) -> list[list[float]]:
        """Dense coefficient grid [i][j] -> float, for numeric evaluators."""
        dx, dy = self.degrees()
        if dx < 0:
            return [[0.0]]
        grid = [[0.0] * (dy + 1) for _ in range(dx + 1)]
        for (i, j), v in self.terms.items():
            grid[i][j] = float(v)
        return grid

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __repr__(self) -> str:
        items = sorted(self.terms.items())
        return f"BiPoly({dict(items)!r})"


# ---------------------------------------------------------------------------
# Wronskians
# ---------------------------------------------------------------------------

def wronskian(polys: Sequence[UniPoly]) -> UniPoly:
    """Wronskian determinant of a sequence of polynomials.

    Uses fraction-free Bareiss elimination over the polynomial ring, so every
    intermediate entry is a polynomial (a minor of the derivative matrix) and
    all divisions are exact.
    """
    n = len(polys)
    if n == 0:
        raise ValueError("wronskian of an empty sequence")
    if any(p.is_zero for p in polys):
        raise ValueError("wronskian requires nonzero polynomials")
    if n == 1:
        return polys[0]
    m: list[list[UniPoly]] = []
    row = list(polys)
    m.append(row)
    for _ in range(n - 1):
        row = [p.deriv() for p in row]
        m.append(row)

    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero:
            for i in range(k + 1, n):
                if not m[i][k].is_zero:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ZERO
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev)
            m[i][k] = ZERO
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RationalFunction:
    """Canonical quotient of two UniPoly: gcd removed, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly = ONE):
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            num, den = ZERO, ONE
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lc = den.lead
            if lc != 1:
                num = num.scale(1 / lc)
                den = den.scale(1 / lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def from_scalar(cls, c: Scalar) -> "RationalFunction":
        return cls(UniPoly.constant(c))

    @property
    def is_polynomial(self) -> bool:
        return self.den == ONE

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, UniPoly):
            return RationalFunction(other)
        return RationalFunction.from_scalar(other)

    def __add__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        return RationalFunction(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other) -> "RationalFunction":
        return self._coerce(other) - self

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        return RationalFunction(self.num * o.den, self.den * o.num)

    def deriv(self) -> "RationalFunction":
        return RationalFunction(
            self.num.deriv() * self.den - self.num * self.den.deriv(),
            self.den * self.den,
        )

    def eval(self, v: Scalar) -> Fraction:
        dv = self.den.eval(v)
        if dv == 0:
            raise ZeroDivisionError(f"pole at {v}")
        return self.num.eval(v) / dv

    def eval_float(self, v):
        return self.num.eval_float(v) / self.den.eval_float(v)

    __call__ = eval_float

    def to_dict(self) -> dict:
        return {"num": self.num.to_strings(), "den": self.den.to_strings()}

    @classmethod
    def from_dict(cls, d: dict) -> "RationalFunction":
        return cls(UniPoly.from_strings(d["num"]), UniPoly.from_strings(d["den"]))

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalFunction)
                and self.num == other.num and self.den == other.den)

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        if self.is_polynomial:
            return str(self.num)
        return f"({self.num}) / ({self.den})"


def rf_simplify(num: UniPoly, den: UniPoly) -> RationalFunction:
    """Canonical rational function num/den (gcd removed, monic denominator)."""
    return RationalFunction(num, den)
