"""Ordered upper/lower Jordan forms and the bases realizing them.

An ordering is the diagonal one wants to see, e.g. ``(2, 1)`` or
``(0, 0, 5)``.  Repeated eigenvalues must sit next to each other; the
chain-link 1s then lie on the first super-diagonal (upper flavor) or the
first sub-diagonal (lower flavor).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from fuchsred.errors import InvalidOrdering, MembershipViolation, SingularMatrix
from fuchsred.linalg import (
    LOWER,
    UPPER,
    Matrix,
    from_columns,
    inverse,
    is_triangular,
    matrices_close,
    kernel_with_nullity,
    residual_ratio,
    scale_of,
    shift,
)
from fuchsred.orbits import OrbitSpec, jordan_matrix
from fuchsred.scalars import Field


@dataclass(frozen=True)
class OrderedJordanForm:
    matrix: Matrix
    flavor: str
    ordering: tuple


def ordering_blocks(ordering: Sequence, spec: OrbitSpec, field: Field) -> list[tuple]:
    """Split a valid ordering into ``(eigenvalue, multiplicity, start)`` blocks.

    Raises :class:`InvalidOrdering` if the multiset differs from the orbit spec's or
    an eigenvalue's occurrences are not contiguous.
    """
    ordering = tuple(field.coerce(x) for x in ordering)
    if len(ordering) != spec.m:
        raise InvalidOrdering(f"ordering has {len(ordering)} slots, spec has m = {spec.m}")
    blocks = []
    start = 0
    while start < len(ordering):
        lam = ordering[start]
        end = start + 1
        while end < len(ordering) and field.is_zero(ordering[end] - lam):
            end += 1
        if any(field.is_zero(lam - b[0]) for b in blocks):
            raise InvalidOrdering(f"occurrences of eigenvalue {lam} are not contiguous")
        k = spec.multiplicity(lam, field)
        if k != end - start:
            raise InvalidOrdering(
                f"eigenvalue {lam} occurs {end - start} times, spec multiplicity is {k}"
            )
        blocks.append((lam, k, start))
        start = end
    return blocks


def jordan_seed(spec: OrbitSpec, ordering: Sequence, flavor: str, field: Field) -> OrderedJordanForm:
    ordering_blocks(ordering, spec, field)
    slots = tuple(field.coerce(x) for x in ordering)
    return OrderedJordanForm(jordan_matrix(slots, flavor, field), flavor, slots)


def _vec_is_zero(v, field: Field, scale) -> bool:
    return all(field.is_zero(x, scale) for x in v)


def _kernel(n: Matrix, k: int, field: Field, scale, lam) -> list[tuple]:
    basis = kernel_with_nullity(n, field, k, scale)
    if len(basis) != k:
        raise MembershipViolation(
            f"eigenvalue {lam}: generalized eigenspace has dimension {len(basis)}, expected {k}"
        )
    if not field.exact:
        bound = field.tol ** 0.5
        if any(residual_ratio(n, v, field) > bound for v in basis):
            raise MembershipViolation(f"eigenvalue {lam}: not an eigenvalue of multiplicity {k}")
    return basis


def _chain(a: Matrix, lam, k: int, field: Field, scale) -> list[tuple]:
    """Jordan chain ``[v_1 (eigenvector), ..., v_k (lead)]`` for ``lam``.

    Exact modes take the first echelon kernel vector not killed by
    ``(a - lam)^(k-1)`` as the lead; floating modes take the one it shrinks
    least.
    """
    n = shift(a, lam)
    if k == 1:
        return [_kernel(n, 1, field, scale, lam)[0]]
    powers = [n]
    for _ in range(k - 1):
        powers.append(powers[-1] @ n)
    sc = None if scale is None else scale**k
    basis = _kernel(powers[-1], k, field, sc, lam)
    below = powers[-2]
    sc1 = None if scale is None else scale ** (k - 1)
    if field.exact:
        lead = next((v for v in basis if not _vec_is_zero(below.apply(v), field, sc1)), None)
    else:
        lead = max(basis, key=lambda v: max(field.magnitude(x) for x in below.apply(v)))
        if _vec_is_zero(below.apply(lead), field, sc1):
            lead = None
    if lead is None:
        raise MembershipViolation(f"eigenvalue {lam}: no Jordan chain of length {k}")
    chain = [lead]
    for _ in range(k - 1):
        chain.append(n.apply(chain[-1]))
    chain.reverse()
    return chain


def jordan_basis(a: Matrix, spec: OrbitSpec, ordering: Sequence, flavor: str,
                 field: Field) -> tuple[Matrix, OrderedJordanForm]:
    """Invertible ``P`` with ``P^{-1} a P`` the ordered Jordan form.

    Each chain's lead vector is the first echelon basis vector of
    ker(a - lam)^k that is not in ker(a - lam)^(k-1).  Upper flavor lists the
    chain eigenvector-first, lower flavor lead-first.
    """
    blocks = ordering_blocks(ordering, spec, field)
    form = jordan_seed(spec, ordering, flavor, field)
    scale = scale_of(field, a)
    columns = []
    for lam, k, _ in blocks:
        sc = None if scale is None else max(scale, field.magnitude(lam))
        chain = _chain(a, lam, k, field, sc)
        columns.extend(chain if flavor == UPPER else reversed(chain))
    p = from_columns(columns)
    try:
        p_inv = inverse(p, field)
    except SingularMatrix:
        raise MembershipViolation("Jordan chains are linearly dependent") from None
    if not matrices_close(p_inv @ a @ p, form.matrix, field, scale):
        raise MembershipViolation("matrix is not conjugate to the ordered Jordan form")
    return p, form


def triangular_to_jordan(t: Matrix, spec: OrbitSpec, ordering: Sequence, flavor: str,
                         field: Field) -> tuple[Matrix, OrderedJordanForm]:
    """Same as :func:`jordan_basis`, for a triangular input whose diagonal is
    ``ordering``; the returned ``P`` is then triangular of the same flavor.
    """
    scale = scale_of(field, t)
    if not is_triangular(t, flavor, field, scale):
        raise ValueError(f"input is not {flavor}-triangular")
    slots = tuple(field.coerce(x) for x in ordering)
    if not all(field.is_zero(d - s, scale) for d, s in zip(t.diagonal(), slots)):
        raise InvalidOrdering("diagonal of the input differs from the ordering")
    p, form = jordan_basis(t, spec, slots, flavor, field)
    if not is_triangular(p, flavor, field, scale_of(field, p)):
        raise RuntimeError("triangular Jordan basis expected for triangular input")
    return p, form
