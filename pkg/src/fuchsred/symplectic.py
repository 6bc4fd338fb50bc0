"""Lie-Poisson forms, tangent vectors on the zero-momentum level, and the
check that the reduction map pulls the product form back to the reduced form.

A tangent vector to an orbit at ``A`` is ``xi = [A, U]``; the Lie-Poisson
form is ``omega(xi, eta) = -tr(U_xi eta)``, which does not depend on the
choice of ``U_xi``.  Tangents to the section are obtained by pushing level
tangents through the (rational) section map with dual numbers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from fuchsred.errors import (
    CorrectionUnsolvable,
    InconsistentSystem,
    OutsideDomain,
    StepThroughBoundary,
)
from fuchsred.linalg import (
    Matrix,
    ad_matrix,
    commutator,
    inverse,
    is_zero_matrix,
    linear_solve,
    scale_of,
    solve_bracket,
    solve_consistent,
    unvec,
    vec,
)
from fuchsred.reduction import (
    DiscreteData,
    FuchsTuple,
    canonical_section,
    reduce,
    xi_inverse,
    xi_matrix,
)
from fuchsred.scalars import EXACT, Dual, DualField, Field, FloatField

FD_STEP = 1e-6
FD_PILOT_STEP = 1e-3
FD_MAX_BOOST = 1e4
FLOAT_REL_TOL = 1e-7


def momentum(tup: FuchsTuple) -> Matrix:
    """Sum of the matrices; zero exactly on the level."""
    return tup.momentum()


def _infer_field(a: Matrix) -> Field:
    x = a.rows[0][0]
    if isinstance(x, (complex, float)):
        return FloatField()
    return EXACT


def lie_poisson(a: Matrix, xi: Matrix, eta: Matrix, field: Field | None = None,
                u_xi: Matrix | None = None):
    """``-tr(U_xi eta)`` with ``[a, U_xi] = xi``; ``U_xi`` is solved for if not given.

    The field defaults to exact unless the entries are Python floats/complex.
    """
    if field is None:
        field = _infer_field(a)
    if u_xi is None:
        u_xi = solve_bracket(a, xi, field)
    n = a.m
    acc = field.zero
    for i in range(n):
        for k in range(n):
            acc = acc + u_xi.rows[i][k] * eta.rows[k][i]
    return -acc


@dataclass(frozen=True)
class TangentTuple:
    """Tangent vector ``(xi^(n))`` at ``base`` with certificates ``[A^(n), U^(n)] = xi^(n)``."""

    base: FuchsTuple
    xi: tuple
    u: tuple

    def validate(self) -> None:
        f = self.base.field
        sc = scale_of(f, *self.base.matrices, *self.xi)
        for a, x, u in zip(self.base.matrices, self.xi, self.u):
            if not is_zero_matrix(commutator(a, u) - x, f, sc):
                raise ValueError("tangent certificate [A, U] != xi")
        total = self.xi[0]
        for x in self.xi[1:]:
            total = total + x
        if not is_zero_matrix(total, f, sc):
            raise ValueError("tangent does not preserve the zero momentum")


def _commutators(base: FuchsTuple, us: Sequence[Matrix]) -> list:
    return [commutator(a, u) for a, u in zip(base.matrices, us)]


def tangent_from_u(base: FuchsTuple, us: Sequence[Matrix]) -> TangentTuple:
    return TangentTuple(base, tuple(_commutators(base, us)), tuple(us))


def gauge_tangent(base: FuchsTuple, x: Matrix) -> TangentTuple:
    """Infinitesimal simultaneous conjugation ``xi^(n) = [A^(n), X]``."""
    return tangent_from_u(base, [x] * base.n)


def _random_matrix(n: int, rng: random.Random, field: Field, span: int = 3) -> Matrix:
    return Matrix.of([[rng.randint(-span, span) for _ in range(n)] for _ in range(n)], field)


def sample_tangent(tup: FuchsTuple, rng: random.Random) -> TangentTuple:
    """Random tangent to the level: random ``U^(n)``, then a correction that
    cancels the momentum defect (echelon solve, free variables zero)."""
    f = tup.field
    m = tup.m
    us = [_random_matrix(m, rng, f) for _ in range(tup.n)]
    defect = tangent_from_u(tup, us).xi
    total = defect[0]
    for x in defect[1:]:
        total = total + x
    blocks = [ad_matrix(a, f) for a in tup.matrices]
    joint = Matrix([sum((list(b.rows[r]) for b in blocks), []) for r in range(m * m)])
    rhs = [-x for x in vec(total)]
    try:
        sol = solve_consistent(joint, rhs, f, error=CorrectionUnsolvable)
    except InconsistentSystem as exc:
        raise CorrectionUnsolvable(str(exc)) from None
    us = [u + unvec(sol[i * m * m:(i + 1) * m * m], m) for i, u in enumerate(us)]
    return tangent_from_u(tup, us)


def sample_tangent_pair(tup: FuchsTuple, rng: random.Random) -> tuple[TangentTuple, TangentTuple]:
    return sample_tangent(tup, rng), sample_tangent(tup, rng)


def total_form(xi: TangentTuple, eta: TangentTuple):
    """Sum over the factors of the Lie-Poisson forms."""
    f = xi.base.field
    acc = f.zero
    for a, x, e, u in zip(xi.base.matrices, xi.xi, eta.xi, xi.u):
        acc = acc + lie_poisson(a, x, e, f, u_xi=u)
    return acc


# --- pushforwards -------------------------------------------------------------


def _dual_tuple(tup: FuchsTuple, tangent: TangentTuple) -> tuple[FuchsTuple, DualField]:
    dual = DualField(tup.field)
    mats = tuple(
        Matrix([[Dual(a, d) for a, d in zip(ra, rd)] for ra, rd in zip(m.rows, t.rows)])
        for m, t in zip(tup.matrices, tangent.xi)
    )
    return FuchsTuple(tup.specs, mats, dual, tup.poles), dual


def _split(m: Matrix) -> tuple[Matrix, Matrix]:
    return m.map(lambda x: x.value), m.map(lambda x: x.deriv)


def pushforward_section(tup: FuchsTuple, data: DiscreteData, tangent: TangentTuple) -> TangentTuple:
    """Differential of the canonical section applied to ``tangent`` (exact, via dual numbers).

    The returned tangent sits at the section point and carries fresh
    certificates ``U`` solved at that point.
    """
    dtup, dual = _dual_tuple(tup, tangent)
    sec = canonical_section(dtup, data.coerce(dual))
    values, derivs = zip(*(_split(m) for m in sec.matrices))
    base = FuchsTuple(tup.specs, tuple(values), tup.field, tup.poles)
    us = tuple(solve_bracket(a, d, tup.field) for a, d in zip(values, derivs))
    return TangentTuple(base, tuple(derivs), us)


@dataclass(frozen=True)
class ReducedTangent:
    a_hat: Matrix
    tail: tuple

    def matrices(self) -> tuple:
        return (self.a_hat,) + tuple(self.tail)


def _to_float(tup: FuchsTuple, field: FloatField) -> FuchsTuple:
    from fuchsred.orbits import OrbitSpec

    specs = tuple(OrbitSpec(s.m, tuple((complex(l), k) for l, k in s.eigs)) for s in tup.specs)
    return FuchsTuple(specs, tuple(m.map(complex) for m in tup.matrices), field, tup.poles)


def _conj(x):
    return x.conjugate() if hasattr(x, "conjugate") else x


def minimal_certificate(a: Matrix, u: Matrix, field: Field) -> Matrix:
    """``U`` minus its orthogonal projection onto the centralizer of ``a``.

    The centralizer is spanned by ``I, a, ..., a^(m-1)`` (one Jordan block per
    eigenvalue), so ``[a, U]`` is unchanged while the Frobenius norm of ``U``
    is minimized.
    """
    m = a.m
    powers = [Matrix.identity(m, field)]
    for _ in range(m - 1):
        powers.append(powers[-1] @ a)

    def inner(x: Matrix, y: Matrix):
        acc = field.zero
        for p, q in zip(x.entries(), y.entries()):
            acc = acc + _conj(p) * q
        return acc

    gram = Matrix([[inner(p, q) for q in powers] for p in powers])
    rhs = [inner(p, u) for p in powers]
    coeffs = linear_solve(gram, rhs, field)
    out = u
    for c, p in zip(coeffs, powers):
        out = out - p.scale(c)
    return out


def strip_gauge(tangent: TangentTuple) -> TangentTuple:
    """Remove the common-conjugation part of a tangent.

    Subtracts ``[A^(n), X]`` (and ``X`` from each certificate) for the ``X``
    minimizing ``sum_n |xi^(n) - [A^(n), X]|^2``.  The result is still tangent
    to the level and has the same image under the differential of
    :func:`~fuchsred.reduction.reduce`.
    """
    tup = tangent.base
    f = tup.field
    k = tup.m * tup.m
    gram = [[f.zero] * k for _ in range(k)]
    rhs = [f.zero] * k
    for a, x in zip(tup.matrices, tangent.xi):
        ad = ad_matrix(a, f)
        vx = vec(x)
        for i in range(k):
            col_i = [_conj(ad.rows[r][i]) for r in range(k)]
            rhs[i] = rhs[i] + sum((c * v for c, v in zip(col_i, vx)), f.zero)
            for j in range(k):
                gram[i][j] = gram[i][j] + sum(
                    (c * ad.rows[r][j] for r, c in enumerate(col_i)), f.zero
                )
    x = unvec(solve_consistent(Matrix(gram), rhs, f), tup.m)
    return tangent_from_u(tup, [u - x for u in tangent.u])


def _curve_point(tup: FuchsTuple, us: Sequence[Matrix], t: float) -> FuchsTuple:
    """``(I - tU) A (I - tU)^{-1}`` factorwise: stays on each orbit, velocity [A, U]."""
    f = tup.field
    ident = Matrix.identity(tup.m, f)
    out = []
    for a, u in zip(tup.matrices, us):
        c = ident - u.scale(f.coerce(t))
        out.append(c @ a @ inverse(c, f))
    return tup.replace(out)


def _central_difference(ftup: FuchsTuple, us, fdata: DiscreteData, h: float) -> list:
    plus = reduce(_curve_point(ftup, us, h), fdata)
    minus = reduce(_curve_point(ftup, us, -h), fdata)
    inv2h = 1.0 / (2.0 * h)
    return [(a - b).scale(inv2h) for a, b in zip(
        (plus.a_hat,) + plus.tail, (minus.a_hat,) + minus.tail)]


def pushforward_reduce(tup: FuchsTuple, data: DiscreteData, tangent: TangentTuple,
                       method: str | None = None, h: float = FD_STEP) -> ReducedTangent:
    """Differential of :func:`reduce` applied to ``tangent``.

    ``method="dual"`` (default in exact mode) evaluates the reduction over dual
    numbers, giving the exact differential.  ``method="fd"`` (default in
    floating mode) uses central differences with step ``h`` along curves that
    stay on the orbits.  The direction is first stripped of its gauge part
    (:func:`strip_gauge`, which does not change the differential) and the
    curves use the shortest certificates (:func:`minimal_certificate`),
    scaled so a pilot difference with step ``FD_PILOT_STEP`` shows the reduced
    point moving at unit relative rate; an exact tuple is converted to
    floating first.
    """
    if method is None:
        method = "dual" if tup.field.exact else "fd"
    if method == "dual":
        dtup, dual = _dual_tuple(tup, tangent)
        p = reduce(dtup, data.coerce(dual))
        return ReducedTangent(
            p.a_hat.map(lambda x: x.deriv), tuple(t.map(lambda x: x.deriv) for t in p.tail)
        )
    if method != "fd":
        raise ValueError(f"unknown method {method!r}")
    # gauge-free direction with shortest certificates, computed in the input's
    # own arithmetic; it is scaled to max|U| = 1 and the scaling undone below
    try:
        us = strip_gauge(tangent).u
    except InconsistentSystem:
        us = tangent.u
    us = [minimal_certificate(a, u, tup.field) for a, u in zip(tup.matrices, us)]
    ffield = tup.field if isinstance(tup.field, FloatField) else FloatField()
    ftup = tup if tup.field is ffield else _to_float(tup, ffield)
    if ftup is not tup:
        us = [u.map(complex) for u in us]
    fdata = DiscreteData(
        data.anchors,
        complex(data.lambda_top),
        tuple(complex(x) for x in data.ordering_up),
        tuple(complex(x) for x in data.ordering_low),
    )
    size = max((abs(x) for u in us for x in u.entries()), default=0.0) or 1.0
    us = [u.scale(1.0 / size) for u in us]
    try:
        base = reduce(ftup, fdata)
        # a coarse pilot difference measures how fast the reduced point moves;
        # the direction is rescaled so it moves at unit relative rate, which
        # keeps the h-step above the roundoff floor of the reduction itself
        pilot = _central_difference(ftup, us, fdata, FD_PILOT_STEP)
        speed = max((abs(x) for d in pilot for x in d.entries()), default=0.0)
        level = max(abs(x) for d in (base.a_hat,) + base.tail for x in d.entries())
        if speed > 0.0 and level > 0.0:
            boost = min(max(level / speed, 1.0 / FD_MAX_BOOST), FD_MAX_BOOST)
            us = [u.scale(boost) for u in us]
            size /= boost
        diff = _central_difference(ftup, us, fdata, h)
    except OutsideDomain as exc:
        raise StepThroughBoundary(f"finite-difference probe left the domain: {exc}") from exc
    diff = [d.scale(size) for d in diff]
    return ReducedTangent(diff[0], tuple(diff[1:]))


# --- the pullback check ---------------------------------------------------------


@dataclass
class TrialResult:
    total: object
    product: object
    terms: dict
    hat_term: object
    level_total: object
    residual_a: object
    residual_b: tuple
    residual_c: object
    residual_level: object


@dataclass
class PullbackReport:
    mode: str
    trials: int = 0
    failures: int = 0
    domain_errors: int = 0
    max_residual_a: float = 0.0
    max_residual_b: float = 0.0
    max_residual_c: float = 0.0
    max_residual_level: float = 0.0
    tolerance: float = 0.0
    results: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.domain_errors == 0 and self.trials > 0

    def to_dict(self) -> dict:
        def fmt(x):
            if self.mode == "exact":
                return "exact-zero" if x == 0 else float(x)
            return float(x)

        return {
            "mode": self.mode,
            "trials": self.trials,
            "failures": self.failures,
            "domain_errors": self.domain_errors,
            "max_residual_a": fmt(self.max_residual_a),
            "max_residual_b": fmt(self.max_residual_b),
            "max_residual_c": fmt(self.max_residual_c),
            "max_residual_level": fmt(self.max_residual_level),
        }


def _hat_tangent(xi_top: Matrix, field: Field) -> Matrix:
    m = xi_top.m
    b = xi_inverse(m, field) @ xi_top @ xi_matrix(m, field)
    return b.block(0, m - 1, 0, m - 1)


def pullback_trial(tup: FuchsTuple, data: DiscreteData, xi: TangentTuple,
                   eta: TangentTuple) -> TrialResult:
    """Evaluate every summand for one tangent pair; residuals are returned raw."""
    f = tup.field
    xs = pushforward_section(tup, data, xi)
    es = pushforward_section(tup, data, eta)
    sec = xs.base
    terms = {}
    for n, (a, x, e, u) in enumerate(zip(sec.matrices, xs.xi, es.xi, xs.u)):
        terms[n] = lie_poisson(a, x, e, f, u_xi=u)
    m = tup.m
    a_hat = (xi_inverse(m, f) @ sec.matrices[data.top] @ xi_matrix(m, f)).block(0, m - 1, 0, m - 1)
    hat_term = lie_poisson(a_hat, _hat_tangent(xs.xi[data.top], f), _hat_tangent(es.xi[data.top], f), f)
    total = f.zero
    for v in terms.values():
        total = total + v
    tail_sum = f.zero
    for n in data.tail_indices(tup.n):
        tail_sum = tail_sum + terms[n]
    product = hat_term + tail_sum
    level_total = total_form(xi, eta)
    return TrialResult(
        total=total,
        product=product,
        terms=terms,
        hat_term=hat_term,
        level_total=level_total,
        residual_a=total - product,
        residual_b=(terms[data.upper], terms[data.lower]),
        residual_c=terms[data.top] - hat_term,
        residual_level=level_total - total,
    )


def verify_pullback(tup: FuchsTuple, data: DiscreteData | None = None, trials: int = 25,
                    rng: random.Random | None = None, rel_tol: float = FLOAT_REL_TOL,
                    keep_results: bool = False) -> PullbackReport:
    """Check, on random tangent pairs to the section, that

    (a) the total form equals the product form (quotient orbit + tail),
    (b) the two triangular-anchor summands vanish individually,
    (c) the top-anchor summand equals the quotient-orbit summand,

    plus that the total form on level tangents equals the total on their
    section images.  Exact mode demands exact zeros; floating mode a residual
    at most ``rel_tol`` relative to the largest summand.
    """
    if data is None:
        data = DiscreteData.default(tup.specs)
    f = tup.field
    data = data.coerce(f)
    rng = rng or random.Random(0)
    report = PullbackReport(mode="exact" if f.exact else "float",
                            tolerance=0.0 if f.exact else rel_tol)
    for _ in range(trials):
        report.trials += 1
        try:
            xi, eta = sample_tangent_pair(tup, rng)
            res = pullback_trial(tup, data, xi, eta)
        except (OutsideDomain, CorrectionUnsolvable):
            report.domain_errors += 1
            continue
        if keep_results:
            report.results.append(res)
        scale = 1.0
        if not f.exact:
            mags = [abs(v) for v in res.terms.values()]
            mags += [abs(res.hat_term), abs(res.total), abs(res.level_total)]
            scale = max(mags) or 1.0
        ra = abs(complex(res.residual_a)) / scale
        rb = max(abs(complex(x)) for x in res.residual_b) / scale
        rc = abs(complex(res.residual_c)) / scale
        rl = abs(complex(res.residual_level)) / scale
        if f.exact:
            failed = not (
                res.residual_a == 0
                and all(x == 0 for x in res.residual_b)
                and res.residual_c == 0
                and res.residual_level == 0
            )
        else:
            failed = max(ra, rb, rc, rl) > rel_tol
        report.failures += int(failed)
        report.max_residual_a = max(report.max_residual_a, ra)
        report.max_residual_b = max(report.max_residual_b, rb)
        report.max_residual_c = max(report.max_residual_c, rc)
        report.max_residual_level = max(report.max_residual_level, rl)
    return report
