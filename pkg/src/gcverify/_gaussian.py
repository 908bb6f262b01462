"""Gaussian rational numbers: the ground field Q(i).

Coefficients are pairs of gmpy2.mpq; all arithmetic is exact.  Values are
immutable and safe to share.
"""

from __future__ import annotations

from gmpy2 import mpq

_MPQ0 = mpq(0)
_MPQ1 = mpq(1)


class GaussianRational:
    """A number a + b*i with a, b exact rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=_MPQ0, im=_MPQ0):
        self.re = re if isinstance(re, type(_MPQ0)) else mpq(re)
        self.im = im if isinstance(im, type(_MPQ0)) else mpq(im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational(a * c, _MPQ0)
        return GaussianRational(a * c - b * d, a * d + b * c)

    def __truediv__(self, other):
        c, d = other.re, other.im
        n = c * c + d * d
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        a, b = self.re, self.im
        return GaussianRational((a * c + b * d) / n, (b * c - a * d) / n)

    def inverse(self):
        c, d = self.re, self.im
        n = c * c + d * d
        if not n:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussianRational(c / n, -d / n)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def scale(self, q):
        return GaussianRational(self.re * q, self.im * q)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return format_gaussian(self)


GR_ZERO = GaussianRational(_MPQ0, _MPQ0)
GR_ONE = GaussianRational(_MPQ1, _MPQ0)
GR_I = GaussianRational(_MPQ0, _MPQ1)
GR_MINUS_ONE = GaussianRational(-_MPQ1, _MPQ0)


def gr_from_int(n: int) -> GaussianRational:
    return GaussianRational(mpq(n), _MPQ0)


def _format_mpq(q) -> str:
    return str(q)


def format_gaussian(z: GaussianRational) -> str:
    """Render canonically: '0', '3/2', 'i', '-2*i', '1/2 + 3*i', '1 - i'."""
    if not z.im:
        return _format_mpq(z.re)
    if z.im == _MPQ1:
        im = "i"
    elif z.im == -_MPQ1:
        im = "-i"
    else:
        im = f"{_format_mpq(z.im)}*i"
    if not z.re:
        return im
    if im.startswith("-"):
        return f"{_format_mpq(z.re)} - {im[1:]}"
    return f"{_format_mpq(z.re)} + {im}"
