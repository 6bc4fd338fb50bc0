"""Canonical section of the zero-momentum level and the map to a product of orbits.

Given a tuple ``A^(1..N)`` with ``sum A^(n) = 0``, three anchors are singled
out: ``top`` (the row-sum anchor), ``upper`` and ``lower``.  The canonical
section conjugates the whole tuple so that

1. the upper anchor is upper-triangular with diagonal ``ordering_up``,
2. the lower anchor is lower-triangular with diagonal ``ordering_low``,
3. every row of the top anchor sums to ``lambda_top``.

The representative is unique.  In that position the top anchor fixes the
all-ones vector, so conjugating it by :func:`xi_matrix` exposes a block
triangular form whose leading ``(m-1) x (m-1)`` block ``a_hat`` lies on the
orbit with one copy of ``lambda_top`` removed.  :func:`reduce` returns
``a_hat`` plus the remaining (tail) matrices; :func:`lift` rebuilds the section
point from them.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from fuchsred.errors import (
    EigenvalueMismatch,
    InvalidSpec,
    LiftedOffOrbit,
    MembershipViolation,
    ZeroEigenvectorComponent,
)
from fuchsred.jordan import jordan_basis, ordering_blocks
from fuchsred.linalg import (
    LOWER,
    UPPER,
    Matrix,
    gauss_ul_decompose,
    inverse,
    is_zero_matrix,
    kernel_with_nullity,
    matrices_close,
    residual_ratio,
    scale_of,
    shift,
    triangular_inverse,
)
from fuchsred.orbits import (
    MembershipReport,
    OrbitSpec,
    check_membership,
    random_orthogonal,
    sample_point,
)
from fuchsred.scalars import Field


@dataclass(frozen=True)
class DiscreteData:
    """Anchor indices, the chosen eigenvalue of the top anchor and two orderings.

    ``anchors`` is ``(top, upper, lower)``: the row-sum anchor, the anchor
    made upper-triangular and the anchor made lower-triangular.
    """

    anchors: tuple
    lambda_top: object
    ordering_up: tuple
    ordering_low: tuple

    @property
    def top(self) -> int:
        return self.anchors[0]

    @property
    def upper(self) -> int:
        return self.anchors[1]

    @property
    def lower(self) -> int:
        return self.anchors[2]

    @classmethod
    def default(cls, specs: Sequence[OrbitSpec]) -> "DiscreteData":
        """Last three indices; first listed eigenvalue; listing-order orderings."""
        n = len(specs)
        top, up, low = n - 1, n - 2, n - 3
        return cls(
            (top, up, low),
            specs[top].eigs[0][0],
            specs[up].slots(),
            specs[low].slots(),
        )

    def coerce(self, field: Field) -> "DiscreteData":
        return DiscreteData(
            tuple(int(i) for i in self.anchors),
            field.coerce(self.lambda_top),
            tuple(field.coerce(x) for x in self.ordering_up),
            tuple(field.coerce(x) for x in self.ordering_low),
        )

    def validate(self, specs: Sequence[OrbitSpec], field: Field) -> None:
        n = len(specs)
        if len(self.anchors) != 3 or len(set(self.anchors)) != 3:
            raise ValueError("anchors must be three distinct indices")
        if any(not 0 <= i < n for i in self.anchors):
            raise ValueError(f"anchor index out of range for N = {n}")
        if specs[self.top].multiplicity(self.lambda_top, field) == 0:
            raise EigenvalueMismatch(
                f"{self.lambda_top} is not an eigenvalue of spec {self.top}"
            )
        ordering_blocks(self.ordering_up, specs[self.upper], field)
        ordering_blocks(self.ordering_low, specs[self.lower], field)

    def tail_indices(self, n: int) -> list[int]:
        return [i for i in range(n) if i not in self.anchors]


def _check_level_traces(specs: Sequence[OrbitSpec], field: Field) -> None:
    total = field.zero
    for s in specs:
        total = total + s.trace(field)
    if not field.is_zero(total, max(1.0, field.magnitude(total)) if not field.exact else None):
        raise InvalidSpec(f"spec traces sum to {total}; the zero-momentum level is empty")


@dataclass(frozen=True)
class FuchsTuple:
    """Residue matrices ``A^(1..N)`` with their orbit specs (and inert pole labels)."""

    specs: tuple
    matrices: tuple
    field: Field
    poles: tuple | None = None

    @property
    def n(self) -> int:
        return len(self.matrices)

    @property
    def m(self) -> int:
        return self.specs[0].m

    def replace(self, matrices) -> "FuchsTuple":
        return FuchsTuple(self.specs, tuple(matrices), self.field, self.poles)

    def conjugate(self, g: Matrix, g_inv: Matrix) -> "FuchsTuple":
        """``g^{-1} A g`` for every matrix."""
        return self.replace(g_inv @ a @ g for a in self.matrices)

    def momentum(self) -> Matrix:
        total = self.matrices[0]
        for a in self.matrices[1:]:
            total = total + a
        return total

    def memberships(self) -> list[MembershipReport]:
        return [check_membership(a, s, self.field) for a, s in zip(self.matrices, self.specs)]

    def validate(self) -> None:
        """Raise unless N >= 3, shapes agree, momentum vanishes and all are on orbit."""
        if self.n < 3:
            raise ValueError("need at least three matrices")
        if len(self.specs) != self.n:
            raise ValueError("one spec per matrix required")
        if any(s.m != self.m for s in self.specs):
            raise InvalidSpec("all specs must share the same m")
        mom = self.momentum()
        if not is_zero_matrix(mom, self.field, scale_of(self.field, *self.matrices)):
            raise ValueError("momentum (sum of matrices) is not zero")
        for i, rep in enumerate(self.memberships()):
            if not rep:
                raise MembershipViolation(f"matrix {i} is off its orbit: {rep.failures()}")


@dataclass(frozen=True)
class ReducedPoint:
    """``a_hat`` on the quotient orbit plus the tail matrices (ascending index)."""

    a_hat: Matrix
    tail: tuple
    specs: tuple
    data: DiscreteData
    field: Field
    poles: tuple | None = None

    @property
    def m(self) -> int:
        return self.specs[0].m

    def quotient(self) -> OrbitSpec:
        return quotient_spec(self.specs[self.data.top], self.data.lambda_top, self.field)

    def memberships(self) -> dict:
        out = {"a_hat": check_membership(self.a_hat, self.quotient(), self.field)}
        for idx, a in zip(self.data.tail_indices(len(self.specs)), self.tail):
            out[idx] = check_membership(a, self.specs[idx], self.field)
        return out

    def validate(self) -> None:
        self.data.validate(self.specs, self.field)
        _check_level_traces(self.specs, self.field)
        for key, rep in self.memberships().items():
            if not rep:
                raise MembershipViolation(f"{key} is off its orbit: {rep.failures()}")

    def same_as(self, other: "ReducedPoint", scale=None) -> bool:
        f = self.field
        if len(self.tail) != len(other.tail):
            return False
        pairs = [(self.a_hat, other.a_hat)] + list(zip(self.tail, other.tail))
        return all(matrices_close(a, b, f, scale) for a, b in pairs)


# --- constants and small helpers --------------------------------------------


def xi_matrix(m: int, field: Field) -> Matrix:
    """Identity with an all-ones last column; sends e_m to the all-ones vector."""
    if m < 2:
        raise ValueError("m >= 2 required")
    zero, one = field.zero, field.one
    return Matrix([[one if (i == j or j == m - 1) else zero for j in range(m)] for i in range(m)])


def xi_inverse(m: int, field: Field) -> Matrix:
    """Identity with last column ``(-1, ..., -1, 1)``."""
    zero, one = field.zero, field.one
    rows = []
    for i in range(m):
        row = [one if i == j else zero for j in range(m)]
        if i < m - 1:
            row[m - 1] = -one
        rows.append(row)
    return Matrix(rows)


def quotient_spec(spec: OrbitSpec, lam, field: Field) -> OrbitSpec:
    """Spec of ``chi(x) / (x - lam)``: one copy of ``lam`` removed."""
    out = []
    found = False
    for mu, k in spec.eigs:
        if not found and field.is_zero(mu - lam):
            found = True
            if k > 1:
                out.append((mu, k - 1))
        else:
            out.append((mu, k))
    if not found:
        raise EigenvalueMismatch(f"{lam} is not an eigenvalue of this orbit spec")
    return OrbitSpec(spec.m - 1, tuple(out))


def _border(a_hat: Matrix, field: Field) -> Matrix:
    """Append a zero last row and zero last column."""
    zero = field.zero
    rows = [list(r) + [zero] for r in a_hat.rows]
    rows.append([zero] * (a_hat.ncols + 1))
    return Matrix(rows)


# --- the section -------------------------------------------------------------


def section_frame(tup: FuchsTuple, data: DiscreteData) -> tuple[Matrix, Matrix]:
    """Frame ``g`` (and ``g^{-1}``) putting ``tup`` into canonical position.

    Raises :class:`GaussObstruction`, :class:`ZeroEigenvectorComponent` or
    :class:`EigenvalueMismatch` when the class lies outside the domain.
    """
    f = tup.field
    specs, mats = tup.specs, tup.matrices
    e_plus, _ = jordan_basis(mats[data.upper], specs[data.upper], data.ordering_up, UPPER, f)
    e_minus, _ = jordan_basis(mats[data.lower], specs[data.lower], data.ordering_low, LOWER, f)
    e_plus_inv = inverse(e_plus, f)
    phi_plus, _ = gauss_ul_decompose(e_plus_inv @ e_minus, f)
    g0 = e_plus @ phi_plus
    g0_inv = triangular_inverse(phi_plus, f, UPPER) @ e_plus_inv
    b = g0_inv @ mats[data.top] @ g0
    shifted = shift(b, data.lambda_top)
    basis = kernel_with_nullity(shifted, f, 1)
    if not f.exact and basis and residual_ratio(shifted, basis[0], f) > f.tol ** 0.5:
        basis = []
    if not basis:
        raise EigenvalueMismatch(f"{data.lambda_top} is not an eigenvalue of matrix {data.top}")
    if len(basis) > 1:
        raise MembershipViolation(f"matrix {data.top} has a {len(basis)}-dimensional eigenspace")
    vec = basis[0]
    vscale = f.scale_of(list(vec))
    if any(f.is_zero(x, vscale) for x in vec):
        zeros = [i for i, x in enumerate(vec) if f.is_zero(x, vscale)]
        raise ZeroEigenvectorComponent(
            f"eigenvector of matrix {data.top} for {data.lambda_top} vanishes at components {zeros}"
        )
    first = vec[0]
    vec = [x / first for x in vec]
    m = len(vec)
    g = g0 @ Matrix.diag(vec, f)
    g_inv = Matrix.diag([f.one / x for x in vec], f) @ g0_inv
    return g, g_inv


def canonical_section(tup: FuchsTuple, data: DiscreteData) -> FuchsTuple:
    """The unique representative of the class of ``tup`` in canonical position."""
    g, g_inv = section_frame(tup, data)
    return tup.conjugate(g, g_inv)


def project(section: FuchsTuple, data: DiscreteData) -> ReducedPoint:
    """Read off ``(a_hat, tail)`` from a tuple already in canonical position."""
    f = section.field
    m = section.m
    b = xi_inverse(m, f) @ section.matrices[data.top] @ xi_matrix(m, f)
    last = b.column(m - 1)
    expected = [f.zero] * (m - 1) + [data.lambda_top]
    sc = scale_of(f, b)
    if not all(f.is_zero(x - y, sc) for x, y in zip(last, expected)):
        raise RuntimeError("top anchor is not block triangular in the section basis")
    a_hat = b.block(0, m - 1, 0, m - 1)
    tail = tuple(section.matrices[i] for i in data.tail_indices(section.n))
    return ReducedPoint(a_hat, tail, section.specs, data, f, section.poles)


def reduce(tup: FuchsTuple, data: DiscreteData | None = None) -> ReducedPoint:
    """Canonical section followed by projection onto the product of orbits."""
    if data is None:
        data = DiscreteData.default(tup.specs)
    return project(canonical_section(tup, data), data)


def lift(point: ReducedPoint, check: bool = True) -> FuchsTuple:
    """Rebuild the canonical-position tuple from a reduced point.

    The top anchor is assembled from ``a_hat`` and the diagonal forced by the
    zero-momentum condition; the strict triangles of the two triangular anchors
    are then forced by the same condition.  With ``check`` set, an anchor that
    falls off its orbit raises :class:`LiftedOffOrbit` (carrying the tuple and
    membership reports) instead of being returned silently.
    """
    f = point.field
    data = point.data
    specs = point.specs
    n = len(specs)
    m = point.m
    zero = f.zero
    mats: list = [None] * n
    for idx, a in zip(data.tail_indices(n), point.tail):
        mats[idx] = a

    diag_top = []
    for i in range(m):
        d = -(data.ordering_up[i] + data.ordering_low[i])
        for idx in data.tail_indices(n):
            d = d - mats[idx].rows[i][i]
        diag_top.append(d)

    ring = _border(point.a_hat, f)
    row_sums = ring.apply([f.one] * m)
    top = []
    for i in range(m):
        row = []
        for j in range(m):
            x = ring.rows[i][j] + (diag_top[j] - ring.rows[j][j])
            if j == m - 1:
                x = x - row_sums[i]
            row.append(x)
        top.append(row)
    mats[data.top] = Matrix(top)

    up = [[zero] * m for _ in range(m)]
    low = [[zero] * m for _ in range(m)]
    others = [mats[i] for i in range(n) if i not in (data.upper, data.lower)]
    for i in range(m):
        up[i][i] = data.ordering_up[i]
        low[i][i] = data.ordering_low[i]
        for j in range(m):
            if i == j:
                continue
            s = zero
            for a in others:
                s = s + a.rows[i][j]
            if i < j:
                up[i][j] = -s
            else:
                low[i][j] = -s
    mats[data.upper] = Matrix(up)
    mats[data.lower] = Matrix(low)

    tup = FuchsTuple(specs, tuple(mats), f, point.poles)
    if check:
        bad = {}
        for idx in data.anchors:
            rep = check_membership(mats[idx], specs[idx], f)
            if not rep:
                bad[idx] = rep
        if bad:
            detail = "; ".join(f"matrix {i}: {r.failures()}" for i, r in bad.items())
            raise LiftedOffOrbit(f"lifted anchor(s) off their orbits ({detail})", tup, bad)
    return tup


# --- sampling -------------------------------------------------------------------


def _has_subset_relation(values: dict, n: int, m: int) -> bool:
    """True if, for some ``0 < k < m``, picking ``k`` eigenvalues from every
    matrix can give sum zero.  Such specs only admit reducible tuples."""
    for k in range(1, m):
        sums = {0}
        for i in range(n):
            eigs = values.get(i, [0] * m)
            picks = {sum(c) for c in itertools.combinations(eigs, k)}
            sums = {a + b for a in sums for b in picks}
        if 0 in sums:
            return True
    return False


def random_level_specs(m: int, n: int, rng: random.Random, field: Field,
                       nilpotent: Sequence[int] = (), span: int = 6) -> tuple:
    """Specs with distinct small-integer eigenvalues whose traces sum to zero.

    Eigenvalues lie in ``[-span, span]``, a range that widens slowly if
    the constraints below keep rejecting samples.  Indices in ``nilpotent`` get
    the single nilpotent block ``{0: m}``.  For three matrices the eigenvalues
    are resampled until no partial selection (``k < m`` from each matrix)
    sums to zero; otherwise every tuple on such a level can be reducible and
    the section may have nothing to act on.
    """
    free = [i for i in range(n) if i not in set(nilpotent)]
    if not free:
        return tuple(OrbitSpec.make([(0, m)], field) for _ in range(n))
    width = span
    for attempt in itertools.count(1):
        if attempt % 200 == 0:
            width += 1
        values = {i: rng.sample(range(-width, width + 1), m) for i in free}
        total = sum(sum(v) for v in values.values())
        last = values[free[-1]]
        last[-1] -= total
        if abs(last[-1]) > width or len(set(last)) != m:
            continue
        if n > 3 or not _has_subset_relation(values, n, m):
            break
    specs = []
    for i in range(n):
        if i in values:
            specs.append(OrbitSpec.distinct(values[i], field))
        else:
            specs.append(OrbitSpec.make([(0, m)], field))
    return tuple(specs)


def sample_reduced(specs: Sequence[OrbitSpec], data: DiscreteData, rng: random.Random,
                   field: Field, poles=None) -> ReducedPoint:
    """Random point of the product of the quotient orbit and the tail orbits."""
    q = quotient_spec(specs[data.top], data.lambda_top, field)
    a_hat = sample_point(q, rng, field)
    tail = tuple(sample_point(specs[i], rng, field) for i in data.tail_indices(len(specs)))
    return ReducedPoint(a_hat, tail, tuple(specs), data, field, poles)


def sample_tuple(specs: Sequence[OrbitSpec], rng: random.Random, field: Field,
                 data: DiscreteData | None = None, conjugate: bool = True,
                 max_tries: int = 50, poles=None) -> FuchsTuple:
    """Random tuple on the zero-momentum level with the given specs.

    A reduced point is sampled and lifted (resampling whenever an anchor
    falls off its orbit), then the whole tuple is conjugated by a random
    rational orthogonal matrix, which puts it in general position without
    rescaling it.
    """
    specs = tuple(specs)
    if data is None:
        data = DiscreteData.default(specs)
    data = data.coerce(field)
    data.validate(specs, field)
    _check_level_traces(specs, field)
    for _ in range(max_tries):
        point = sample_reduced(specs, data, rng, field, poles)
        try:
            tup = lift(point)
        except LiftedOffOrbit:
            continue
        if conjugate:
            g, g_inv = random_orthogonal(tup.m, rng, field)
            tup = tup.conjugate(g, g_inv)
        return tup
    raise InvalidSpec(f"no point on the level found after {max_tries} attempts")
