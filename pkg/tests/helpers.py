"""Shared builders for tests: hand-made boundary families and small samplers.

All boundary families use m = 2, N = 4 with anchors (top, upper, lower) =
(3, 2, 1) and index 0 as the tail.  Each family is a curve ``eps -> tuple``
on the zero-momentum level which meets the exceptional locus at eps = 0.
"""

from __future__ import annotations

import random
from fractions import Fraction

from fuchsred import EXACT, DiscreteData, FuchsTuple, OrbitSpec, ReducedPoint
from fuchsred.linalg import Matrix
from fuchsred.orbits import random_conjugator

F = EXACT


def _spec(*vals):
    return OrbitSpec.distinct(vals, F)


def _mat(rows):
    return Matrix.of(rows, F)


FAMILY_SPECS = (_spec(-10, -11), _spec(3, 4), _spec(1, 2), _spec(5, 6))
FAMILY_DATA = DiscreteData((3, 2, 1), 5, (1, 2), (3, 4)).coerce(F)


def _close_level(tail, lower, upper) -> FuchsTuple:
    top = -(tail + lower + upper)
    return FuchsTuple(FAMILY_SPECS, (tail, lower, upper, top), F)


def zero_component_family(eps) -> FuchsTuple:
    """At eps = 0 the eigenvector of the top anchor has a zero component."""
    e = Fraction(eps)
    tail = _mat([[-9 + e, 1], [-2 - 3 * e - e * e, -12 - e]])
    y = 2 + Fraction(5, 2) * e + Fraction(1, 2) * e * e
    lower = _mat([[3, 0], [y, 4]])
    upper = _mat([[1, 1], [0, 2]])
    return _close_level(tail, lower, upper)


def gauss_family(eps) -> FuchsTuple:
    """At eps = 0 the upper and lower anchors share the eigenvector e1, so the
    UL factorization of the change of basis breaks down."""
    e = Fraction(eps)
    tail = _mat([[-9, 2], [-1, -12]])
    lower = _mat([[4, 0], [e, 3]])
    x = Fraction(2) / (1 - e) - 2
    upper = _mat([[1, x], [0, 2]])
    return _close_level(tail, lower, upper)


def in_general_position(tup: FuchsTuple, seed: int) -> FuchsTuple:
    g, g_inv = random_conjugator(tup.m, random.Random(seed), tup.field)
    return tup.conjugate(g, g_inv)


NILPOTENT_UPPER_SPECS = (_spec(-10, -11), _spec(3, 4), OrbitSpec.make([(0, 2)], F), _spec(5, 9))
NILPOTENT_UPPER_DATA = DiscreteData((3, 2, 1), 5, (0, 0), (3, 4)).coerce(F)


def off_orbit_point() -> ReducedPoint:
    """A reduced point whose lift makes the nilpotent upper anchor the zero matrix.

    The zero matrix has the right characteristic polynomial but a
    two-dimensional eigenspace, so it is not on the nilpotent orbit.
    """
    mu, low1, q = 9, 4, -11
    tail = _mat([[-10, mu + low1 + q], [0, q]])
    return ReducedPoint(
        _mat([[mu]]), (tail,), NILPOTENT_UPPER_SPECS, NILPOTENT_UPPER_DATA, F
    )
