"""Lie-Poisson forms, tangents, pushforwards and the pullback check."""

import random

import pytest

from fuchsred import EXACT, DiscreteData, FloatField, OrbitSpec, lie_poisson, total_form
from fuchsred.linalg import Matrix, commutator
from fuchsred.reduction import random_level_specs, sample_tuple
from fuchsred.scalars import gq
from fuchsred.symplectic import (
    gauge_tangent,
    minimal_certificate,
    momentum,
    pullback_trial,
    pushforward_reduce,
    pushforward_section,
    sample_tangent,
    sample_tangent_pair,
    strip_gauge,
    tangent_from_u,
    verify_pullback,
)

F = EXACT


def M(rows):
    return Matrix.of(rows, F)


def instance(m, n, seed, nilpotent=()):
    rng = random.Random(seed)
    specs = random_level_specs(m, n, rng, F, nilpotent=nilpotent)
    data = DiscreteData.default(specs).coerce(F)
    return sample_tuple(specs, rng, F, data), data, rng


def zero_tangent(x):
    return tangent_from_u(x, [Matrix.zeros(x.m, x.m, F)] * x.n)


# --- momentum and Lie-Poisson --------------------------------------------------------


def test_momentum():
    x, _, _ = instance(2, 4, 0)
    assert momentum(x) == Matrix.zeros(2, 2, F)
    a = M([[1, 2], [3, 4]])
    pair = type(x)((OrbitSpec.make([(0, 2)], F),) * 2, (a, -a), F)
    assert momentum(pair) == Matrix.zeros(2, 2, F)
    d = M([[0, 1], [0, 0]])
    bumped = x.replace((x.matrices[0] + d,) + x.matrices[1:])
    assert momentum(bumped) == d


def test_lie_poisson_diag_example():
    a = Matrix.diag([1, 2], F)
    e12, e21 = M([[0, 1], [0, 0]]), M([[0, 0], [1, 0]])
    xi, eta = commutator(a, e12), commutator(a, e21)
    assert eta == e21  # [diag(1, 2), E21] = +E21
    assert lie_poisson(a, xi, eta, F) == gq(-1)
    assert lie_poisson(a, eta, xi, F) == gq(1)


@pytest.mark.parametrize("seed", range(10))
def test_lie_poisson_antisymmetric(seed):
    rng = random.Random(seed)
    m = 2 + seed % 3
    x, _, _ = instance(m, 3, seed)
    a = x.matrices[0]
    u = M([[rng.randint(-3, 3) for _ in range(m)] for _ in range(m)])
    v = M([[rng.randint(-3, 3) for _ in range(m)] for _ in range(m)])
    xi, eta = commutator(a, u), commutator(a, v)
    assert lie_poisson(a, xi, eta, F, u_xi=u) == -lie_poisson(a, eta, xi, F, u_xi=v)
    assert lie_poisson(a, xi, xi, F, u_xi=u) == 0
    # solved certificates give the same value as the given ones
    assert lie_poisson(a, xi, eta, F) == lie_poisson(a, xi, eta, F, u_xi=u)


def test_lie_poisson_float():
    f = FloatField()
    a = Matrix([[1.0, 0.5], [0.0, 2.0]])
    u = Matrix([[0.0, 1.0], [2.0, 0.0]])
    v = Matrix([[1.0, -1.0], [0.5, 0.0]])
    xi, eta = commutator(a, u), commutator(a, v)
    val = lie_poisson(a, xi, eta, f, u_xi=u)
    assert abs(val + lie_poisson(a, eta, xi, f, u_xi=v)) < 1e-12


# --- tangents and the total form -------------------------------------------------------


@pytest.mark.parametrize("m, n, seed", [(2, 3, 1), (2, 4, 2), (3, 4, 3), (3, 5, 4)])
def test_sampled_tangents(m, n, seed):
    x, _, rng = instance(m, n, seed)
    xi, eta = sample_tangent_pair(x, rng)
    xi.validate()
    eta.validate()
    total = xi.xi[0]
    for t in xi.xi[1:]:
        total = total + t
    assert total == Matrix.zeros(m, m, F)
    a = [v for t in xi.xi for v in t.entries()]
    b = [v for t in eta.xi for v in t.entries()]
    gram = (sum((p * p for p in a), gq(0)) * sum((q * q for q in b), gq(0))
            - sum((p * q for p, q in zip(a, b)), gq(0)) ** 2)
    assert gram != 0


@pytest.mark.parametrize("seed", range(4))
def test_total_form_antisymmetric_and_gauge_degenerate(seed):
    x, _, rng = instance(3, 4, 30 + seed)
    xi, eta = sample_tangent_pair(x, rng)
    assert total_form(xi, eta) == -total_form(eta, xi)
    assert total_form(xi, xi) == 0
    g = gauge_tangent(x, M([[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]))
    assert total_form(xi, g) == 0
    assert total_form(g, xi) == 0


# --- pushforwards -----------------------------------------------------------------------


def test_zero_tangent_pushes_to_zero():
    x, data, _ = instance(3, 4, 5)
    out = pushforward_reduce(x, data, zero_tangent(x))
    assert all(v == 0 for mat in out.matrices() for v in mat.entries())


@pytest.mark.parametrize("seed", range(3))
def test_gauge_tangent_pushes_to_zero(seed):
    x, data, rng = instance(3, 4, 40 + seed)
    g = gauge_tangent(x, M([[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]))
    out = pushforward_reduce(x, data, g)
    assert all(v == 0 for mat in out.matrices() for v in mat.entries())


@pytest.mark.parametrize("seed", range(3))
def test_strip_gauge_and_minimal_certificates_keep_pushforward(seed):
    x, data, rng = instance(3, 4, 50 + seed)
    t = sample_tangent(x, rng)
    stripped = strip_gauge(t)
    stripped.validate()
    minimal = tangent_from_u(
        x, [minimal_certificate(a, u, F) for a, u in zip(x.matrices, stripped.u)]
    )
    assert minimal.xi == stripped.xi
    ref = pushforward_reduce(x, data, t).matrices()
    assert pushforward_reduce(x, data, stripped).matrices() == ref
    assert pushforward_reduce(x, data, minimal).matrices() == ref


def test_minimal_certificate_is_orthogonal_to_centralizer():
    a = M([[2, 1, 0], [0, 2, 0], [1, 0, -1]])
    u = M([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    w = minimal_certificate(a, u, F)
    assert commutator(a, w) == commutator(a, u)
    powers = [Matrix.identity(3, F), a, a @ a]
    for p in powers:
        assert sum((x.conjugate() * y for x, y in zip(p.entries(), w.entries())), gq(0)) == 0


def test_section_pushforward_is_tangent_at_section():
    x, data, rng = instance(2, 4, 60)
    t = sample_tangent(x, rng)
    s = pushforward_section(x, data, t)
    s.validate()


@pytest.mark.parametrize("m, n, seed", [(2, 4, 70), (3, 4, 71)])
def test_dual_matches_finite_differences(m, n, seed):
    x, data, rng = instance(m, n, seed)
    t = sample_tangent(x, rng)
    exact = [complex(v) for mat in pushforward_reduce(x, data, t).matrices() for v in mat.entries()]
    fd = [v for mat in pushforward_reduce(x, data, t, method="fd").matrices() for v in mat.entries()]
    scale = max(abs(v) for v in exact) or 1.0
    assert max(abs(a - b) for a, b in zip(exact, fd)) <= 1e-5 * scale


def test_unknown_method():
    x, data, _ = instance(2, 4, 0)
    with pytest.raises(ValueError):
        pushforward_reduce(x, data, zero_tangent(x), method="magic")


# --- the pullback check -------------------------------------------------------------------


def test_pullback_trial_parts():
    x, data, rng = instance(2, 4, 80)
    xi, eta = sample_tangent_pair(x, rng)
    res = pullback_trial(x, data, xi, eta)
    assert res.residual_a == 0 and res.residual_c == 0 and res.residual_level == 0
    assert all(r == 0 for r in res.residual_b)
    assert res.total == res.product


def test_verify_pullback_exact_m2_n4():
    x, data, _ = instance(2, 4, 7)
    rep = verify_pullback(x, data, trials=25, rng=random.Random(7))
    assert rep.ok and rep.trials == 25 and rep.failures == 0
    doc = rep.to_dict()
    for key in ("max_residual_a", "max_residual_b", "max_residual_c"):
        assert doc[key] == "exact-zero"
    assert doc["domain_errors"] == 0


def test_verify_pullback_nilpotent():
    x, data, _ = instance(2, 4, 8, nilpotent=(1,))
    rep = verify_pullback(x, data, trials=10, rng=random.Random(8))
    assert rep.ok and rep.to_dict()["max_residual_a"] == "exact-zero"


def test_verify_pullback_float():
    x, data, _ = instance(3, 4, 9)
    f = FloatField()
    xf = type(x)(
        tuple(OrbitSpec.make([(complex(l), k) for l, k in s.eigs], f) for s in x.specs),
        tuple(a.map(complex) for a in x.matrices),
        f,
    )
    rep = verify_pullback(xf, data.coerce(f), trials=5, rng=random.Random(9))
    assert rep.ok
    assert rep.max_residual_a <= 1e-7 and rep.max_residual_c <= 1e-7
    assert isinstance(rep.to_dict()["max_residual_a"], float)
