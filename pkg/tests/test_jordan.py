"""Ordered Jordan bases, exact and floating."""

import random

import pytest

from fuchsred import EXACT, FloatField, OrbitSpec
from fuchsred.errors import InvalidOrdering, MembershipViolation
from fuchsred.jordan import jordan_basis, jordan_seed, triangular_to_jordan
from fuchsred.linalg import LOWER, UPPER, Matrix, inverse, is_triangular, matrices_close
from fuchsred.orbits import random_conjugator, sample_point

F = EXACT
NIL2 = OrbitSpec.make([(0, 2)], F)


def M(rows, field=F):
    return Matrix.of(rows, field)


def test_seed_examples():
    assert jordan_seed(NIL2, (0, 0), UPPER, F).matrix == M([[0, 1], [0, 0]])
    assert jordan_seed(NIL2, (0, 0), LOWER, F).matrix == M([[0, 0], [1, 0]])
    spec = OrbitSpec.distinct([1, 2], F)
    assert jordan_seed(spec, (2, 1), UPPER, F).matrix == Matrix.diag([2, 1], F)


def test_bad_orderings():
    spec = OrbitSpec.make([(3, 2), (1, 1)], F)
    with pytest.raises(InvalidOrdering):
        jordan_seed(spec, (3, 1, 3), UPPER, F)  # block split in two
    with pytest.raises(InvalidOrdering):
        jordan_seed(spec, (3, 3, 2), UPPER, F)


def test_already_jordan_gives_identity():
    j = M([[0, 1], [0, 0]])
    p, form = jordan_basis(j, NIL2, (0, 0), UPPER, F)
    assert p == Matrix.identity(2, F)
    assert form.matrix == j


@pytest.mark.parametrize("seed", range(6))
def test_conjugated_nilpotent(seed):
    g, g_inv = random_conjugator(2, random.Random(seed), F)
    a = g_inv @ M([[0, 1], [0, 0]]) @ g
    p, _ = jordan_basis(a, NIL2, (0, 0), UPPER, F)
    assert inverse(p, F) @ a @ p == M([[0, 1], [0, 0]])


def test_reordering_distinct_gives_permutation():
    spec = OrbitSpec.distinct([2, 1], F)
    p, form = jordan_basis(Matrix.diag([2, 1], F), spec, (1, 2), UPPER, F)
    assert form.matrix == Matrix.diag([1, 2], F)
    assert p == Matrix.of([[0, 1], [1, 0]], F)


@pytest.mark.parametrize("flavor", [UPPER, LOWER])
@pytest.mark.parametrize("seed", range(5))
def test_mixed_blocks(flavor, seed):
    rng = random.Random(seed)
    spec = OrbitSpec.make([(2, 3), (-1, 1)], F)
    a = sample_point(spec, rng, F)
    ordering = (-1, 2, 2, 2) if seed % 2 else (2, 2, 2, -1)
    p, form = jordan_basis(a, spec, ordering, flavor, F)
    assert inverse(p, F) @ a @ p == form.matrix


def test_triangular_rescale():
    p, form = triangular_to_jordan(M([[0, 5], [0, 0]]), NIL2, (0, 0), UPPER, F)
    assert form.matrix == M([[0, 1], [0, 0]])
    assert inverse(p, F) @ M([[0, 5], [0, 0]]) @ p == form.matrix
    assert is_triangular(p, UPPER, F)


def test_triangular_distinct():
    t = M([[1, 7], [0, 2]])
    spec = OrbitSpec.distinct([1, 2], F)
    p, form = triangular_to_jordan(t, spec, (1, 2), UPPER, F)
    assert form.matrix == Matrix.diag([1, 2], F)
    assert is_triangular(p, UPPER, F)
    assert inverse(p, F) @ t @ p == form.matrix


def test_triangular_identity():
    j = M([[3, 1], [0, 3]])
    p, _ = triangular_to_jordan(j, OrbitSpec.make([(3, 2)], F), (3, 3), UPPER, F)
    assert p == Matrix.identity(2, F)


def test_off_orbit_rejected():
    with pytest.raises(MembershipViolation):
        jordan_basis(Matrix.zeros(2, 2, F), NIL2, (0, 0), UPPER, F)


@pytest.mark.parametrize("seed", range(4))
def test_float_mode(seed):
    f = FloatField()
    rng = random.Random(seed)
    spec = OrbitSpec.make([(1, 2), (4, 1)], F)
    a = sample_point(spec, rng, F)
    af = a.map(complex)
    fspec = OrbitSpec.make([(1, 2), (4, 1)], f)
    p, form = jordan_basis(af, fspec, (1, 1, 4), UPPER, f)
    assert matrices_close(inverse(p, f) @ af @ p, form.matrix, f, 10.0)
