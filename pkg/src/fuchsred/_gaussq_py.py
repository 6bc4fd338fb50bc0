"""Pure-Python Gaussian rationals (fallback for the compiled ``_gaussq`` kernel).

A value is ``re_num/re_den + (im_num/im_den) i`` with positive, coprime
denominators.  Both implementations share this exact surface.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class DivisionByZero(ZeroDivisionError):
    """Raised when dividing by a scalar that is zero under the active zero test."""


def _q(n, d):
    if d < 0:
        n, d = -n, -d
    g = gcd(n, d)
    if g != 1:
        n //= g
        d //= g
    return n, d


def _qadd(an, ad, bn, bd):
    if ad == bd:
        return _q(an + bn, ad)
    return _q(an * bd + bn * ad, ad * bd)


def _qsub(an, ad, bn, bd):
    if ad == bd:
        return _q(an - bn, ad)
    return _q(an * bd - bn * ad, ad * bd)


def _qmul(an, ad, bn, bd):
    if an == 0 or bn == 0:
        return 0, 1
    g1 = gcd(an, bd)
    g2 = gcd(bn, ad)
    return (an // g1) * (bn // g2), (ad // g2) * (bd // g1)


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, int):
        return GaussianRational._raw(x, 1, 0, 1)
    if isinstance(x, Fraction):
        return GaussianRational._raw(x.numerator, x.denominator, 0, 1)
    return NotImplemented


class GaussianRational:
    __slots__ = ("re_num", "re_den", "im_num", "im_den")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        self.re_num = re.numerator
        self.re_den = re.denominator
        self.im_num = im.numerator
        self.im_den = im.denominator

    @classmethod
    def _raw(cls, rn, rd, inn, ind):
        obj = cls.__new__(cls)
        obj.re_num = rn
        obj.re_den = rd
        obj.im_num = inn
        obj.im_den = ind
        return obj

    @classmethod
    def from_parts(cls, re_num, re_den, im_num, im_den):
        if re_den == 0 or im_den == 0:
            raise DivisionByZero("zero denominator")
        rn, rd = _q(int(re_num), int(re_den))
        inn, ind = _q(int(im_num), int(im_den))
        return cls._raw(rn, rd, inn, ind)

    @property
    def real(self):
        return Fraction(self.re_num, self.re_den)

    @property
    def imag(self):
        return Fraction(self.im_num, self.im_den)

    def parts(self):
        return self.re_num, self.re_den, self.im_num, self.im_den

    def is_zero(self):
        return self.re_num == 0 and self.im_num == 0

    def conjugate(self):
        return GaussianRational._raw(self.re_num, self.re_den, -self.im_num, self.im_den)

    def __complex__(self):
        return complex(self.re_num / self.re_den, self.im_num / self.im_den)

    def __bool__(self):
        return not self.is_zero()

    def __neg__(self):
        return GaussianRational._raw(-self.re_num, self.re_den, -self.im_num, self.im_den)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        rn, rd = _qadd(self.re_num, self.re_den, other.re_num, other.re_den)
        if self.im_num == 0 and other.im_num == 0:
            return GaussianRational._raw(rn, rd, 0, 1)
        inn, ind = _qadd(self.im_num, self.im_den, other.im_num, other.im_den)
        return GaussianRational._raw(rn, rd, inn, ind)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        rn, rd = _qsub(self.re_num, self.re_den, other.re_num, other.re_den)
        if self.im_num == 0 and other.im_num == 0:
            return GaussianRational._raw(rn, rd, 0, 1)
        inn, ind = _qsub(self.im_num, self.im_den, other.im_num, other.im_den)
        return GaussianRational._raw(rn, rd, inn, ind)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, ad, b, bd = self.re_num, self.re_den, self.im_num, self.im_den
        c, cd, d, dd = other.re_num, other.re_den, other.im_num, other.im_den
        if b == 0 and d == 0:
            rn, rd = _qmul(a, ad, c, cd)
            return GaussianRational._raw(rn, rd, 0, 1)
        acn, acd = _qmul(a, ad, c, cd)
        bdn, bdd = _qmul(b, bd, d, dd)
        adn, add = _qmul(a, ad, d, dd)
        bcn, bcd = _qmul(b, bd, c, cd)
        rn, rd = _qsub(acn, acd, bdn, bdd)
        inn, ind = _qadd(adn, add, bcn, bcd)
        return GaussianRational._raw(rn, rd, inn, ind)

    __rmul__ = __mul__

    def inverse(self):
        a, ad, b, bd = self.re_num, self.re_den, self.im_num, self.im_den
        if a == 0 and b == 0:
            raise DivisionByZero("inverse of exact zero")
        if b == 0:
            n, d = _q(ad, a)
            return GaussianRational._raw(n, d, 0, 1)
        # 1/(a+bi) = (a - bi)/(a^2 + b^2)
        nn, nd = _qadd(a * a, ad * ad, b * b, bd * bd)
        rn, rd = _qmul(a, ad, nd, nn)
        inn, ind = _qmul(-b, bd, nd, nn)
        return GaussianRational._raw(rn, rd, inn, ind)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.im_num == 0 and self.im_num == 0:
            if other.re_num == 0:
                raise DivisionByZero("division by exact zero")
            rn, rd = _qmul(self.re_num, self.re_den, other.re_den, other.re_num)
            return GaussianRational._raw(*_q(rn, rd), 0, 1)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussianRational._raw(1, 1, 0, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return (
            self.re_num == other.re_num
            and self.re_den == other.re_den
            and self.im_num == other.im_num
            and self.im_den == other.im_den
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        if eq is NotImplemented:
            return eq
        return not eq

    def __hash__(self):
        if self.im_num == 0:
            return hash(Fraction(self.re_num, self.re_den))
        return hash((self.re_num, self.re_den, self.im_num, self.im_den))

    def __abs__(self):
        return abs(complex(self))

    def __reduce__(self):
        return (GaussianRational.from_parts, self.parts())

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        re = Fraction(self.re_num, self.re_den)
        if self.im_num == 0:
            return str(re)
        im = Fraction(self.im_num, self.im_den)
        if self.re_num == 0:
            return f"{im}i"
        sign = "-" if im < 0 else "+"
        return f"{re}{sign}{abs(im)}i"
