"""Exact Gaussian-rational scalars.

Every coefficient in this package is an element of Q(i), held as a pair of
`fractions.Fraction`s.  There is deliberately no float anywhere: equality of
two series really means equality, and a residual "vanishes" only if every
stored coefficient is exactly zero.
"""

from fractions import Fraction


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("expected int/Fraction/str, got %r" % (x,))


class GaussRat:
    """A Gaussian rational re + im*i with exact Fraction parts.

    >>> i = GaussRat(0, 1)
    >>> i * i
    GaussRat(-1, 0)
    >>> (GaussRat(1, 2) / GaussRat(1, 2)).is_one()
    True
    >>> GaussRat(Fraction(3, 4)) + GaussRat(Fraction(1, 4))
    GaussRat(1, 0)
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    # -- basic queries ----------------------------------------------------

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def is_one(self):
        return self.re == 1 and self.im == 0

    def is_real(self):
        return self.im == 0

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GaussRat):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussRat(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re * o.re - self.im * o.im,
                        self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussRat")
        return GaussRat((self.re * o.re + self.im * o.im) / n,
                        (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("integer powers only")
        if n < 0:
            return GaussRat(1) / self ** (-n)
        out = GaussRat(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self):
        return GaussRat(self.re, -self.im)

    # -- hashing / display ------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return "GaussRat(%s, %s)" % (self.re, self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return "%s*i" % self.im
        sign = "+" if self.im > 0 else "-"
        return "%s%s%s*i" % (self.re, sign, abs(self.im))


ZERO = GaussRat(0)
ONE = GaussRat(1)
I = GaussRat(0, 1)


def minus_i_pow(n):
    """(-i)**n for integer n, cheaply.

    >>> [str(minus_i_pow(k)) for k in range(4)]
    ['1', '-1*i', '-1', '1*i']
    """
    return (GaussRat(1), GaussRat(0, -1), GaussRat(-1), GaussRat(0, 1))[n % 4]
