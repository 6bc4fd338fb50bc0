"""Scalar modes: exact Gaussian rationals, floating complex, and dual numbers.

Every algorithm in the package is written once against a :class:`Field`
object, which supplies constants, coercion and the zero test.  The three
modes are

* :class:`ExactField` -- :class:`GaussianRational` entries, exact zero test;
* :class:`FloatField` -- Python ``complex`` entries, ``|z| <= tol * scale``;
* :class:`DualField`  -- :class:`Dual` entries over either of the above; the
  zero test looks at the value part only.

The Gaussian-rational kernel is compiled (Cython) when available and falls
back to pure Python otherwise.  Set ``FUCHSRED_PURE_PYTHON=1`` to force the
fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Any

from fuchsred._gaussq_py import DivisionByZero
from fuchsred._gaussq_py import GaussianRational as PyGaussianRational

if os.environ.get("FUCHSRED_PURE_PYTHON"):
    GaussianRational = PyGaussianRational
    KERNEL = "python"
else:
    try:
        from fuchsred._gaussq import GaussianRational
        KERNEL = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        GaussianRational = PyGaussianRational
        KERNEL = "python"

__all__ = [
    "KERNEL",
    "DivisionByZero",
    "GaussianRational",
    "Dual",
    "Field",
    "ExactField",
    "FloatField",
    "DualField",
    "EXACT",
    "gq",
    "field_for_mode",
]

DEFAULT_TOL = 1e-10


def gq(re: Any = 0, im: Any = 0) -> GaussianRational:
    """Build a Gaussian rational from ints, Fractions or strings like ``"3/4"``."""
    return GaussianRational(Fraction(re), Fraction(im))


class Dual:
    """First-order dual number ``value + deriv * eps`` over any base scalar.

    Plain (non-dual) operands are treated as constants.
    """

    __slots__ = ("value", "deriv")

    def __init__(self, value, deriv):
        self.value = value
        self.deriv = deriv

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value + other.value, self.deriv + other.deriv)
        return Dual(self.value + other, self.deriv)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value - other.value, self.deriv - other.deriv)
        return Dual(self.value - other, self.deriv)

    def __rsub__(self, other):
        return Dual(other - self.value, -self.deriv)

    def __neg__(self):
        return Dual(-self.value, -self.deriv)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.value * other.value,
                self.value * other.deriv + self.deriv * other.value,
            )
        return Dual(self.value * other, self.deriv * other)

    __rmul__ = __mul__

    def inverse(self):
        if self.value == 0:
            raise DivisionByZero("dual number with zero value part")
        inv = 1 / self.value
        return Dual(inv, -(self.deriv * inv * inv))

    def __truediv__(self, other):
        if isinstance(other, Dual):
            return self * other.inverse()
        if other == 0:
            raise DivisionByZero("division by zero")
        inv = 1 / other
        return Dual(self.value * inv, self.deriv * inv)

    def __rtruediv__(self, other):
        return other * self.inverse()

    def __eq__(self, other):
        if isinstance(other, Dual):
            return self.value == other.value and self.deriv == other.deriv
        return self.value == other and self.deriv == 0

    def __hash__(self):
        return hash((self.value, self.deriv))

    def __repr__(self):
        return f"Dual({self.value!r}, {self.deriv!r})"


class Field:
    """Arithmetic context: constants, coercion and the zero test for one mode."""

    name = "abstract"
    exact = False

    def coerce(self, x):
        raise NotImplementedError

    def is_zero(self, x, scale=None) -> bool:
        raise NotImplementedError

    def magnitude(self, x) -> float:
        """Absolute value used for tolerance scaling and pivot choice."""
        return abs(complex(x))

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def scale_of(self, entries) -> float | None:
        """Tolerance scale for a collection of entries (``None`` in exact mode)."""
        return None

    # --- the scalar_ops surface -------------------------------------------------
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inverse(self, a, scale=None):
        if self.is_zero(a, scale):
            raise DivisionByZero(f"{a!r} is zero in {self.name} mode")
        return self.one / a

    def div(self, a, b, scale=None):
        if self.is_zero(b, scale):
            raise DivisionByZero(f"{b!r} is zero in {self.name} mode")
        return a / b

    def equal(self, a, b, scale=None) -> bool:
        return self.is_zero(a - b, scale)


class ExactField(Field):
    name = "exact"
    exact = True

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        if isinstance(x, str):
            return gq(x)
        if isinstance(x, PyGaussianRational) or hasattr(x, "re_num"):
            return GaussianRational.from_parts(*x.parts())
        raise TypeError(f"cannot represent {x!r} exactly")

    def is_zero(self, x, scale=None) -> bool:
        return x.is_zero()

    def __repr__(self):
        return "ExactField()"

    def __eq__(self, other):
        return isinstance(other, ExactField)

    def __hash__(self):
        return hash("exact")


class FloatField(Field):
    """Complex double precision with an explicit, caller-supplied tolerance."""

    name = "float"

    def __init__(self, tol: float = DEFAULT_TOL):
        if tol < 0:
            raise ValueError("tolerance must be non-negative")
        self.tol = tol

    def coerce(self, x):
        if isinstance(x, complex):
            return x
        if hasattr(x, "re_num"):
            return complex(x)
        return complex(x)

    def is_zero(self, x, scale=None) -> bool:
        bound = self.tol if not scale else self.tol * scale
        return abs(x) <= bound

    def scale_of(self, entries) -> float | None:
        return max((abs(x) for x in entries), default=0.0) or None

    def __repr__(self):
        return f"FloatField(tol={self.tol!r})"

    def __eq__(self, other):
        return isinstance(other, FloatField) and other.tol == self.tol

    def __hash__(self):
        return hash(("float", self.tol))


class DualField(Field):
    """Dual numbers over ``base``; branching decisions use the value part."""

    def __init__(self, base: Field):
        self.base = base
        self.name = f"dual[{base.name}]"
        self.exact = base.exact
        self.tol = getattr(base, "tol", None)

    def coerce(self, x):
        if isinstance(x, Dual):
            return x
        return Dual(self.base.coerce(x), self.base.zero)

    def lift(self, value, deriv):
        return Dual(self.base.coerce(value), self.base.coerce(deriv))

    def is_zero(self, x, scale=None) -> bool:
        if isinstance(x, Dual):
            return self.base.is_zero(x.value, scale)
        return self.base.is_zero(self.base.coerce(x), scale)

    def magnitude(self, x) -> float:
        return self.base.magnitude(x.value)

    def scale_of(self, entries) -> float | None:
        return self.base.scale_of([x.value for x in entries])

    def __repr__(self):
        return f"DualField({self.base!r})"

    def __eq__(self, other):
        return isinstance(other, DualField) and other.base == self.base

    def __hash__(self):
        return hash(("dual", self.base))


EXACT = ExactField()


def field_for_mode(mode: str, tol: float = DEFAULT_TOL) -> Field:
    if mode == "exact":
        return EXACT
    if mode in ("float", "floating"):
        return FloatField(tol)
    raise ValueError(f"unknown mode {mode!r}; expected 'exact' or 'float'")
