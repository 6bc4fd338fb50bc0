# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gaussian rationals.

Same surface as ``_gaussq_py``.  Parts are Python ints; when every part is
small the arithmetic runs on ``__int128`` with a C gcd and only the result
is boxed, otherwise the Python-int path is taken.
"""

from fractions import Fraction
from math import gcd as _pygcd

from fuchsred._gaussq_py import DivisionByZero


cdef extern from *:
    ctypedef long long i128 "__int128"

cdef extern from "Python.h":
    long long PyLong_AsLongLongAndOverflow(object obj, int* overflow) except? -1
    object PyLong_FromLongLong(long long v)

# |part| below ADD_LIM keeps cross products of a sum inside 127 bits;
# MUL_LIM does the same for the four-product complex multiply.
cdef long long ADD_LIM = 4611686018427387904   # 2**62
cdef long long MUL_LIM = 2147483648            # 2**31
cdef long long LL_MAX = 9223372036854775807


cdef inline bint _small(object x, long long lim, long long* out):
    cdef int ovf = 0
    cdef long long v = PyLong_AsLongLongAndOverflow(x, &ovf)
    if ovf != 0 or v >= lim or v <= -lim:
        return False
    out[0] = v
    return True


cdef inline i128 _gcd128(i128 a, i128 b):
    cdef i128 t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b != 0:
        t = a % b
        a = b
        b = t
    return a


cdef object _box(i128 v):
    cdef i128 hi
    if -<i128>LL_MAX <= v <= <i128>LL_MAX:
        return PyLong_FromLongLong(<long long>v)
    neg = v < 0
    if neg:
        v = -v
    hi = v >> 62
    lo = <long long>(v - (hi << 62))
    r = (_box(hi) << 62) + PyLong_FromLongLong(lo)
    return -r if neg else r


cdef inline void _red(i128* n, i128* d):
    cdef i128 g
    if d[0] < 0:
        n[0] = -n[0]
        d[0] = -d[0]
    if n[0] == 0:
        d[0] = 1
        return
    g = _gcd128(n[0], d[0])
    if g != 1:
        n[0] = n[0] // g
        d[0] = d[0] // g


cdef tuple _q(object n, object d):
    if d < 0:
        n = -n
        d = -d
    g = _pygcd(n, d)
    if g != 1:
        n = n // g
        d = d // g
    return n, d


cdef tuple _qadd(object an, object ad, object bn, object bd):
    if ad == bd:
        return _q(an + bn, ad)
    return _q(an * bd + bn * ad, ad * bd)


cdef tuple _qsub(object an, object ad, object bn, object bd):
    if ad == bd:
        return _q(an - bn, ad)
    return _q(an * bd - bn * ad, ad * bd)


cdef tuple _qmul(object an, object ad, object bn, object bd):
    if an == 0 or bn == 0:
        return 0, 1
    g1 = _pygcd(an, bd)
    g2 = _pygcd(bn, ad)
    return (an // g1) * (bn // g2), (ad // g2) * (bd // g1)


cdef GaussianRational _make(object rn, object rd, object inn, object ind):
    cdef GaussianRational r = GaussianRational.__new__(GaussianRational)
    r.re_num = rn
    r.re_den = rd
    r.im_num = inn
    r.im_den = ind
    return r


cdef object _coerce(object x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, int):
        return _make(x, 1, 0, 1)
    if isinstance(x, Fraction):
        return _make(x.numerator, x.denominator, 0, 1)
    return NotImplemented


cdef GaussianRational _add(GaussianRational x, GaussianRational y, int sign):
    cdef long long a, ad, b, bd, c, cd, d, dd
    cdef i128 rn, rd, inn, ind
    if (_small(x.re_num, ADD_LIM, &a) and _small(x.re_den, ADD_LIM, &ad)
            and _small(x.im_num, ADD_LIM, &b) and _small(x.im_den, ADD_LIM, &bd)
            and _small(y.re_num, ADD_LIM, &c) and _small(y.re_den, ADD_LIM, &cd)
            and _small(y.im_num, ADD_LIM, &d) and _small(y.im_den, ADD_LIM, &dd)):
        if ad == cd:
            rn = <i128>a + sign * <i128>c
            rd = ad
        else:
            rn = <i128>a * cd + sign * <i128>c * ad
            rd = <i128>ad * cd
        _red(&rn, &rd)
        if b == 0 and d == 0:
            return _make(_box(rn), _box(rd), 0, 1)
        if bd == dd:
            inn = <i128>b + sign * <i128>d
            ind = bd
        else:
            inn = <i128>b * dd + sign * <i128>d * bd
            ind = <i128>bd * dd
        _red(&inn, &ind)
        return _make(_box(rn), _box(rd), _box(inn), _box(ind))
    if sign > 0:
        re = _qadd(x.re_num, x.re_den, y.re_num, y.re_den)
        im = _qadd(x.im_num, x.im_den, y.im_num, y.im_den)
    else:
        re = _qsub(x.re_num, x.re_den, y.re_num, y.re_den)
        im = _qsub(x.im_num, x.im_den, y.im_num, y.im_den)
    return _make(re[0], re[1], im[0], im[1])


cdef inline void _mulq(long long a, long long ad, long long c, long long cd,
                       i128* n, i128* d):
    n[0] = <i128>a * c
    d[0] = <i128>ad * cd
    _red(n, d)


cdef GaussianRational _mul(GaussianRational x, GaussianRational y):
    cdef long long a, ad, b, bd, c, cd, d, dd
    cdef i128 p1n, p1d, p2n, p2d, rn, rd, inn, ind
    if (_small(x.re_num, MUL_LIM, &a) and _small(x.re_den, MUL_LIM, &ad)
            and _small(x.im_num, MUL_LIM, &b) and _small(x.im_den, MUL_LIM, &bd)
            and _small(y.re_num, MUL_LIM, &c) and _small(y.re_den, MUL_LIM, &cd)
            and _small(y.im_num, MUL_LIM, &d) and _small(y.im_den, MUL_LIM, &dd)):
        _mulq(a, ad, c, cd, &p1n, &p1d)
        if b == 0 and d == 0:
            return _make(_box(p1n), _box(p1d), 0, 1)
        _mulq(b, bd, d, dd, &p2n, &p2d)
        rn = p1n * p2d - p2n * p1d
        rd = p1d * p2d
        _red(&rn, &rd)
        _mulq(a, ad, d, dd, &p1n, &p1d)
        _mulq(b, bd, c, cd, &p2n, &p2d)
        inn = p1n * p2d + p2n * p1d
        ind = p1d * p2d
        _red(&inn, &ind)
        return _make(_box(rn), _box(rd), _box(inn), _box(ind))
    if x.im_num == 0 and y.im_num == 0:
        re = _qmul(x.re_num, x.re_den, y.re_num, y.re_den)
        return _make(re[0], re[1], 0, 1)
    ac = _qmul(x.re_num, x.re_den, y.re_num, y.re_den)
    bd_ = _qmul(x.im_num, x.im_den, y.im_num, y.im_den)
    ad_ = _qmul(x.re_num, x.re_den, y.im_num, y.im_den)
    bc = _qmul(x.im_num, x.im_den, y.re_num, y.re_den)
    re = _qsub(ac[0], ac[1], bd_[0], bd_[1])
    im = _qadd(ad_[0], ad_[1], bc[0], bc[1])
    return _make(re[0], re[1], im[0], im[1])


cdef GaussianRational _inverse(GaussianRational x):
    cdef long long a, ad
    cdef i128 n, d
    if x.re_num == 0 and x.im_num == 0:
        raise DivisionByZero("inverse of exact zero")
    if x.im_num == 0:
        if _small(x.re_num, ADD_LIM, &a) and _small(x.re_den, ADD_LIM, &ad):
            n = ad
            d = a
            if d < 0:
                n = -n
                d = -d
            return _make(_box(n), _box(d), 0, 1)
        re = _q(x.re_den, x.re_num)
        return _make(re[0], re[1], 0, 1)
    a_, ad_, b_, bd_ = x.re_num, x.re_den, x.im_num, x.im_den
    nn = _qadd(a_ * a_, ad_ * ad_, b_ * b_, bd_ * bd_)
    re = _qmul(a_, ad_, nn[1], nn[0])
    im = _qmul(-b_, bd_, nn[1], nn[0])
    return _make(re[0], re[1], im[0], im[1])


def _rebuild(re_num, re_den, im_num, im_den):
    return GaussianRational.from_parts(re_num, re_den, im_num, im_den)


cdef class GaussianRational:
    cdef readonly object re_num
    cdef readonly object re_den
    cdef readonly object im_num
    cdef readonly object im_den

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        self.re_num = re.numerator
        self.re_den = re.denominator
        self.im_num = im.numerator
        self.im_den = im.denominator

    @classmethod
    def from_parts(cls, re_num, re_den, im_num, im_den):
        if re_den == 0 or im_den == 0:
            raise DivisionByZero("zero denominator")
        re = _q(int(re_num), int(re_den))
        im = _q(int(im_num), int(im_den))
        return _make(re[0], re[1], im[0], im[1])

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
        return _make(self.re_num, self.re_den, -self.im_num, self.im_den)

    def __complex__(self):
        return complex(self.re_num / self.re_den, self.im_num / self.im_den)

    def __bool__(self):
        return not (self.re_num == 0 and self.im_num == 0)

    def __neg__(self):
        return _make(-self.re_num, self.re_den, -self.im_num, self.im_den)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, <GaussianRational>other, 1)

    def __radd__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _add(<GaussianRational>other, self, 1)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, <GaussianRational>other, -1)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _add(<GaussianRational>other, self, -1)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, <GaussianRational>other)

    def __rmul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _mul(<GaussianRational>other, self)

    def inverse(self):
        return _inverse(self)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, _inverse(<GaussianRational>other))

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _mul(<GaussianRational>other, _inverse(self))

    def __pow__(self, k, mod):
        if not isinstance(k, int) or mod is not None:
            return NotImplemented
        if k < 0:
            return _inverse(self) ** (-k)
        result = _make(1, 1, 0, 1)
        base = self
        while k:
            if k & 1:
                result = _mul(result, base)
            base = _mul(base, base)
            k >>= 1
        return result

    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        y = <GaussianRational>o
        return (self.re_num == y.re_num and self.re_den == y.re_den
                and self.im_num == y.im_num and self.im_den == y.im_den)

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
        return (_rebuild, self.parts())

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
