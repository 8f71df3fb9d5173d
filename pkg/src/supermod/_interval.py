"""Dyadic-rational interval arithmetic for rigorous sign determination.

Everything here is exact: endpoints are `Fraction`s, enclosures of pi and of
roots of unity come from alternating/Taylor series with explicit remainder
bounds.  No floating point enters the trusted path.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Iv:
    """Closed real interval [lo, hi] with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if hi < lo:
            raise ValueError("empty interval")
        self.lo = lo
        self.hi = hi

    def __repr__(self):
        return f"Iv({self.lo}, {self.hi})"

    def __add__(self, other):
        other = _as_iv(other)
        return Iv(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Iv(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_as_iv(other))

    def __rsub__(self, other):
        return _as_iv(other) + (-self)

    def __mul__(self, other):
        other = _as_iv(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Iv(min(products), max(products))

    __rmul__ = __mul__

    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    def sign(self):
        """-1/0/+1 when the interval decides the sign, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def width(self):
        return self.hi - self.lo

    def mag(self):
        return max(abs(self.lo), abs(self.hi))

    def dyadic(self, prec):
        """Round endpoints outward to multiples of 2**-prec."""
        scale = 1 << prec
        lo = Fraction(_floor_div(self.lo * scale), scale)
        hi = Fraction(_ceil_div(self.hi * scale), scale)
        return Iv(lo, hi)


def _as_iv(x):
    return x if isinstance(x, Iv) else Iv(Fraction(x))


def _floor_div(q):
    return q.numerator // q.denominator


def _ceil_div(q):
    return -((-q.numerator) // q.denominator)


class CIv:
    """Rectangular complex interval (re, im real intervals)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        self.re = _as_iv(re)
        self.im = _as_iv(im) if im is not None else Iv(_ZERO)

    def __repr__(self):
        return f"CIv({self.re}, {self.im})"

    def __add__(self, other):
        other = _as_civ(other)
        return CIv(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return CIv(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_as_civ(other))

    def __mul__(self, other):
        other = _as_civ(other)
        return CIv(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def scale(self, q):
        return CIv(self.re * q, self.im * q)

    def dyadic(self, prec):
        return CIv(self.re.dyadic(prec), self.im.dyadic(prec))

    def is_real_zero_im(self):
        return self.im.contains_zero()


def _as_civ(x):
    return x if isinstance(x, CIv) else CIv(_as_iv(x))


def _atan_iv(inv_x, prec):
    """Enclosure of arctan(1/inv_x) for integer inv_x >= 2.

    Alternating series: consecutive partial sums bracket the limit.
    """
    x = Fraction(1, inv_x)
    term = x
    x2 = x * x
    total = _ZERO
    k = 0
    bound = Fraction(1, 1 << (prec + 4))
    partials = []
    while term > bound:
        total += term if k % 2 == 0 else -term
        partials.append(total)
        k += 1
        term = term * x2 / (2 * k + 1)
    if len(partials) < 2:
        partials.append(total + (term if k % 2 == 0 else -term))
    lo, hi = sorted(partials[-2:])
    return Iv(lo - bound, hi + bound)


@lru_cache(maxsize=None)
def pi_iv(prec):
    """Enclosure of pi of width < 2**-prec (Machin's formula)."""
    a = _atan_iv(5, prec + 8)
    b = _atan_iv(239, prec + 8)
    return (16 * a - 4 * b).dyadic(prec)


@lru_cache(maxsize=None)
def root_of_unity_civ(p, q, prec):
    """Enclosure of exp(2*pi*i*p/q), width ~2**-prec per component.

    Taylor sums for cos/sin with the Lagrange bound |x|^N / N!.
    """
    p %= q
    angle = pi_iv(prec + 16) * Fraction(2 * p, q)
    x = angle.dyadic(prec + 16)
    hi = x.mag()
    # pick a term count K with hi^(2K)/(2K)! below the target
    bound = Fraction(1, 1 << (prec + 8))
    k_terms = 4
    while hi ** (2 * k_terms) / _factorial(2 * k_terms) > bound:
        k_terms += 2
    rem_cos = hi ** (2 * k_terms) / _factorial(2 * k_terms)
    rem_sin = hi ** (2 * k_terms + 1) / _factorial(2 * k_terms + 1)
    cos_acc = Iv(_ZERO)
    sin_acc = Iv(_ZERO)
    power = Iv(_ONE)  # x^(2k)
    for k in range(k_terms):
        c_term = power * Fraction((-1) ** k, _factorial(2 * k))
        cos_acc = cos_acc + c_term
        s_term = (power * x) * Fraction((-1) ** k, _factorial(2 * k + 1))
        sin_acc = sin_acc + s_term
        power = (power * x * x).dyadic(prec + 16)
    cos_acc = cos_acc + Iv(-rem_cos, rem_cos)
    sin_acc = sin_acc + Iv(-rem_sin, rem_sin)
    return CIv(cos_acc.dyadic(prec), sin_acc.dyadic(prec))


@lru_cache(maxsize=None)
def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out
