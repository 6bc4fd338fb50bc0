"""Conjugacy classes with one-dimensional eigenspaces.

An :class:`OrbitSpec` lists eigenvalues with multiplicities; every eigenvalue
carries a single Jordan block, so the class is determined by the
characteristic polynomial and has dimension m(m-1).
"""

from __future__ import annotations

import random
from fractions import Fraction
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from fuchsred.errors import InvalidSpec, RestrictionViolation
from fuchsred.linalg import UPPER, LOWER, Matrix, inverse, rank, scale_of, shift
from fuchsred.errors import SingularMatrix
from fuchsred.scalars import Field

CONJUGATOR_RANGE = 3


@dataclass(frozen=True)
class OrbitSpec:
    """Eigenvalues (in listing order) with multiplicities summing to ``m``."""

    m: int
    eigs: tuple

    @classmethod
    def make(cls, eigs: Sequence, field: Field, m: int | None = None) -> "OrbitSpec":
        """Coerce and validate ``[(eigenvalue, multiplicity), ...]``."""
        pairs = tuple((field.coerce(lam), int(k)) for lam, k in eigs)
        total = sum(k for _, k in pairs)
        spec = cls(total if m is None else int(m), pairs)
        spec.validate(field)
        return spec

    @classmethod
    def distinct(cls, values: Sequence, field: Field) -> "OrbitSpec":
        return cls.make([(v, 1) for v in values], field)

    def validate(self, field: Field) -> None:
        if not self.eigs:
            raise InvalidSpec("spec lists no eigenvalues")
        if any(k < 1 for _, k in self.eigs):
            raise InvalidSpec("multiplicities must be positive")
        total = sum(k for _, k in self.eigs)
        if total != self.m:
            raise InvalidSpec(f"multiplicities sum to {total}, expected m = {self.m}")
        values = [lam for lam, _ in self.eigs]
        for i in range(len(values)):
            for j in range(i):
                if field.is_zero(values[i] - values[j]):
                    raise RestrictionViolation(
                        f"eigenvalue {values[i]} listed twice: that asks for more than one "
                        "Jordan block, i.e. an eigenspace of dimension > 1, which the "
                        "one-dimensional-eigenspace restriction excludes"
                    )

    @property
    def values(self) -> tuple:
        return tuple(lam for lam, _ in self.eigs)

    def slots(self) -> tuple:
        """Eigenvalues repeated by multiplicity, in listing order."""
        return tuple(lam for lam, k in self.eigs for _ in range(k))

    def trace(self, field: Field):
        t = field.zero
        for lam, k in self.eigs:
            t = t + lam * field.coerce(k)
        return t

    def multiplicity(self, lam, field: Field) -> int:
        for mu, k in self.eigs:
            if field.is_zero(mu - lam):
                return k
        return 0

    def is_diagonalizable(self) -> bool:
        return all(k == 1 for _, k in self.eigs)


@dataclass
class EigenCheck:
    eigenvalue: object
    multiplicity: int
    rank_shift: int
    rank_power: int
    ok: bool
    reason: str = ""


@dataclass
class MembershipReport:
    """Verdict of :func:`check_membership`; truthy iff the matrix is on the orbit."""

    ok: bool
    checks: list = dc_field(default_factory=list)
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> list:
        out = [c for c in self.checks if not c.ok]
        return [f"{c.eigenvalue}: {c.reason}" for c in out] + ([self.reason] if self.reason else [])


def _power(a: Matrix, k: int) -> Matrix:
    result = a
    for _ in range(k - 1):
        result = result @ a
    return result


def check_membership(a: Matrix, spec: OrbitSpec, field: Field) -> MembershipReport:
    """Is ``a`` on the orbit of ``spec``?

    For each listed (lam, k): rank(a - lam) must be m - 1 (one-dimensional
    eigenspace) and rank((a - lam)^k) must be m - k (generalized eigenspace of
    dimension k).  Since the multiplicities sum to m this pins the spectrum.
    """
    if a.nrows != a.ncols or a.nrows != spec.m:
        return MembershipReport(False, [], f"matrix is {a.nrows}x{a.ncols}, spec has m = {spec.m}")
    m = spec.m
    scale = scale_of(field, a)
    checks = []
    for lam, k in spec.eigs:
        n = shift(a, lam)
        sc = max(scale or 0.0, field.magnitude(lam)) or None
        r1 = rank(n, field, sc)
        rk = r1 if k == 1 else rank(_power(n, k), field, None if sc is None else sc**k)
        reasons = []
        if r1 != m - 1:
            if r1 < m - 1:
                reasons.append(f"eigenspace has dimension {m - r1} > 1")
            else:
                reasons.append("not an eigenvalue")
        if rk != m - k:
            reasons.append(f"generalized eigenspace has dimension {m - rk}, expected {k}")
        checks.append(EigenCheck(lam, k, r1, rk, not reasons, "; ".join(reasons)))
    return MembershipReport(all(c.ok for c in checks), checks)


def orbit_dimension(spec: OrbitSpec) -> int:
    """Complex dimension m(m-1) of the orbit (centralizer has dimension m)."""
    return spec.m * (spec.m - 1)


def jordan_matrix(slots: Sequence, flavor: str, field: Field) -> Matrix:
    """Matrix with diagonal ``slots`` and chain-link 1s between equal neighbours."""
    slots = [field.coerce(x) for x in slots]
    n = len(slots)
    zero, one = field.zero, field.one
    rows = [[zero] * n for _ in range(n)]
    for i, lam in enumerate(slots):
        rows[i][i] = lam
    for i in range(n - 1):
        if field.is_zero(slots[i] - slots[i + 1]):
            if flavor == UPPER:
                rows[i][i + 1] = one
            elif flavor == LOWER:
                rows[i + 1][i] = one
            else:
                raise ValueError(f"unknown flavor {flavor!r}")
    return Matrix(rows)


def random_conjugator(n: int, rng: random.Random, field: Field,
                      lo: int = -CONJUGATOR_RANGE, hi: int = CONJUGATOR_RANGE):
    """Random invertible matrix with small integer entries and its inverse."""
    while True:
        g = Matrix.of([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)], field)
        try:
            return g, inverse(g, field)
        except SingularMatrix:
            continue


def random_unimodular(n: int, rng: random.Random, field: Field, span: int = 1):
    """Random ``g = L U`` with unit-triangular integer factors, and its inverse.

    Both ``g`` and ``g^{-1}`` are integral, which keeps sampled instances small
    and well conditioned.
    """
    zero, one = field.zero, field.one
    lower = Matrix([[field.coerce(rng.randint(-span, span)) if j < i else (one if i == j else zero)
                     for j in range(n)] for i in range(n)])
    upper = Matrix([[field.coerce(rng.randint(-span, span)) if j > i else (one if i == j else zero)
                     for j in range(n)] for i in range(n)])
    g = lower @ upper
    return g, inverse(g, field)


def random_orthogonal(n: int, rng: random.Random, field: Field, reflections: int = 2,
                      span: int = 2):
    """Product of rational Householder reflections ``I - 2 v v^T / (v^T v)``.

    The result is exactly orthogonal (condition number one), so conjugating
    by it moves a tuple into general position without changing its scale.
    Returns ``(q, q^{-1}) = (q, q^T)``.
    """
    q = Matrix.identity(n, field)
    for _ in range(reflections):
        v = [0] * n
        while not any(v):
            v = [rng.randint(-span, span) for _ in range(n)]
        norm2 = sum(x * x for x in v)
        c = field.coerce(Fraction(2, norm2))
        h = Matrix([[(field.one if i == j else field.zero) - c * field.coerce(v[i] * v[j])
                     for j in range(n)] for i in range(n)])
        q = q @ h
    return q, q.transpose()


def sample_point(spec: OrbitSpec, rng: random.Random, field: Field) -> Matrix:
    """``g^{-1} J g`` for the upper Jordan seed ``J`` of ``spec`` and a random unimodular ``g``."""
    seed = jordan_matrix(spec.slots(), UPPER, field)
    g, g_inv = random_unimodular(spec.m, rng, field)
    return g_inv @ seed @ g
