"""Scalar kernels (compiled and pure Python), field objects and dual numbers."""

import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuchsred import scalars
from fuchsred._gaussq_py import GaussianRational as PyGQ
from fuchsred.scalars import EXACT, DivisionByZero, Dual, DualField, FloatField, gq

KERNELS = [pytest.param(PyGQ, id="python")]
try:
    from fuchsred._gaussq import GaussianRational as CyGQ

    KERNELS.append(pytest.param(CyGQ, id="compiled"))
except ImportError:  # pragma: no cover
    CyGQ = None

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@pytest.mark.parametrize("G", KERNELS)
class TestKernel:
    def test_conjugate_product(self, G):
        assert G(1, 2) * G(1, -2) == G(5)

    def test_inverse_of_half(self, G):
        assert G(Fraction(1, 2)).inverse() == G(2)

    def test_normal_form(self, G):
        x = G(Fraction(6, -4), Fraction(0, 7))
        assert x.parts() == (-3, 2, 0, 1)
        assert str(G(Fraction(1, 2), -3)) == "1/2-3i"

    def test_division_by_zero(self, G):
        with pytest.raises(DivisionByZero):
            G(0).inverse()
        with pytest.raises(ZeroDivisionError):
            G(1) / G(0)

    def test_mixed_with_ints(self, G):
        assert G(3) + 1 == G(4)
        assert 1 - G(3) == G(-2)
        assert 2 / G(4) == G(Fraction(1, 2))
        assert G(2) == 2 and hash(G(2)) == hash(2)

    def test_powers(self, G):
        z = G(1, 1)
        assert z**2 == G(0, 2)
        assert z**-2 == G(0, Fraction(-1, 2))
        assert z**0 == G(1)

    @settings(max_examples=60, deadline=None)
    @given(a=fractions, b=fractions, c=fractions, d=fractions, e=fractions, f=fractions)
    def test_field_axioms(self, G, a, b, c, d, e, f):
        x, y, z = G(a, b), G(c, d), G(e, f)
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x - x == G(0)
        if not y.is_zero():
            assert (x / y) * y == x
            assert y * y.inverse() == G(1)

    @settings(max_examples=40, deadline=None)
    @given(a=fractions, b=fractions)
    def test_complex_conversion(self, G, a, b):
        assert complex(G(a, b)) == pytest.approx(complex(float(a), float(b)))
        assert G(a, b).conjugate() == G(a, -b)


@pytest.mark.skipif(CyGQ is None, reason="compiled kernel not built")
@settings(max_examples=80, deadline=None)
@given(a=fractions, b=fractions, c=fractions, d=fractions)
def test_compiled_agrees_with_python(a, b, c, d):
    px, py = PyGQ(a, b), PyGQ(c, d)
    cx, cy = CyGQ(a, b), CyGQ(c, d)
    assert (px + py).parts() == (cx + cy).parts()
    assert (px - py).parts() == (cx - cy).parts()
    assert (px * py).parts() == (cx * cy).parts()
    if not py.is_zero():
        assert (px / py).parts() == (cx / cy).parts()
    assert hash(px) == hash(cx)


def test_pure_python_fallback_selected_by_env():
    env = dict(os.environ, FUCHSRED_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import fuchsred; print(fuchsred.KERNEL)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_gq_parses_strings():
    assert gq("3/4", "-1/2") == scalars.GaussianRational(Fraction(3, 4), Fraction(-1, 2))


def test_dual_square():
    x = Dual(3, 1)
    assert x * x == Dual(9, 6)


def test_dual_quotient_rule():
    # d/dx (1 / x) at 2 is -1/4
    q = 1 / Dual(gq(2), gq(1))
    assert q.value == gq(Fraction(1, 2)) and q.deriv == gq(Fraction(-1, 4))


def test_dual_field_zero_test_uses_value():
    f = DualField(EXACT)
    assert f.is_zero(Dual(gq(0), gq(5)))
    assert not f.is_zero(Dual(gq(1), gq(0)))
    assert f.lift(2, 3) == Dual(gq(2), gq(3))


def test_float_field_relative_zero_test():
    f = FloatField(tol=1e-10)
    assert f.is_zero(1e-12)
    assert not f.is_zero(1e-6)
    assert f.is_zero(1e-6, scale=1e5)
    assert DualField(f).tol == f.tol


def test_exact_field_coerce():
    assert EXACT.coerce(Fraction(1, 3)) == gq("1/3")
    assert EXACT.is_zero(gq(0))
    assert not EXACT.is_zero(gq(0, Fraction(1, 10**30)))


small = st.integers(min_value=-5, max_value=5)


@settings(max_examples=40, deadline=None)
@given(a=st.lists(small, min_size=9, max_size=9), b=st.lists(small, min_size=9, max_size=9),
       rhs=st.lists(small, min_size=3, max_size=3))
def test_dual_float_matches_finite_difference(a, b, rhs):
    """Dual evaluation of a package rational function (inverse, then a solve)
    against central differences with step 1e-7."""
    from fuchsred.linalg import Matrix, inverse, linear_solve

    f = FloatField()
    d = DualField(f)
    a_m = [[complex(a[3 * i + j] + (12 if i == j else 0)) for j in range(3)] for i in range(3)]
    b_m = [[complex(b[3 * i + j]) for j in range(3)] for i in range(3)]
    r = [complex(x) for x in rhs]

    def func(t):
        m = Matrix([[a_m[i][j] + t * b_m[i][j] for j in range(3)] for i in range(3)])
        inv = inverse(m, f)
        return list(inv.entries()) + list(linear_solve(m, r, f))

    curve = Matrix([[Dual(a_m[i][j], b_m[i][j]) for j in range(3)] for i in range(3)])
    dual_out = list(inverse(curve, d).entries()) + list(
        linear_solve(curve, [d.coerce(x) for x in r], d))
    h = 1e-7
    fd = [(p - q) / (2 * h) for p, q in zip(func(h), func(-h))]
    derivs = [x.deriv for x in dual_out]
    scale = max(abs(x) for x in derivs)
    if scale == 0:
        assert max(abs(x) for x in fd) < 1e-8
        return
    assert max(abs(p - q) for p, q in zip(derivs, fd)) <= 1e-6 * scale
