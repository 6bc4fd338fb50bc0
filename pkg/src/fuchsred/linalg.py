"""Dense matrices over a scalar :class:`~fuchsred.scalars.Field`.

Matrices are small (m <= 8 or so) and immutable; entries live in nested
tuples.  Elimination is written out by hand so the same code runs over exact
Gaussian rationals, floats and dual numbers.

Two elimination regimes are used:

* row-reduced echelon form (:func:`rref`) for kernels, ranks and consistent
  solves -- the RREF is unique, so row exchanges do not affect results;
* the pivot-free UL sweep of :func:`gauss_ul_decompose`, where a zero pivot
  is a domain-boundary signal and is never repaired.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from fuchsred.errors import (
    GaussObstruction,
    InconsistentSystem,
    NotInTangentSpace,
    SingularMatrix,
)
from fuchsred.scalars import Field

UPPER = "upper"
LOWER = "lower"
DIAGONAL = "diagonal"


class Matrix:
    """Immutable dense matrix; rows are tuples of scalars."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def of(cls, rows, field: Field) -> "Matrix":
        return cls([[field.coerce(x) for x in r] for r in rows])

    @classmethod
    def identity(cls, n: int, field: Field) -> "Matrix":
        one, zero = field.one, field.zero
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field) -> "Matrix":
        zero = field.zero
        return cls([[zero] * ncols for _ in range(nrows)])

    @classmethod
    def diag(cls, values: Sequence, field: Field) -> "Matrix":
        zero = field.zero
        n = len(values)
        return cls([[values[i] if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def m(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("matrix is not square")
        return self.nrows

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for r in self.rows:
            yield from r

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def map(self, f) -> "Matrix":
        return Matrix([[f(x) for x in r] for r in self.rows])

    def tolist(self) -> list:
        return [list(r) for r in self.rows]

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix([r[c0:c1] for r in self.rows[r0:r1]])

    def trace(self):
        t = self.rows[0][0]
        for i in range(1, self.nrows):
            t = t + self.rows[i][i]
        return t

    def diagonal(self) -> tuple:
        return tuple(self.rows[i][i] for i in range(min(self.nrows, self.ncols)))

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "Matrix":
        return Matrix([[c * a for a in r] for r in self.rows])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matmul")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = r[0] * c[0]
                for k in range(1, len(r)):
                    acc = acc + r[k] * c[k]
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product."""
        out = []
        for r in self.rows:
            acc = r[0] * v[0]
            for k in range(1, len(r)):
                acc = acc + r[k] * v[k]
            out.append(acc)
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


def conjugate(a: Matrix, g: Matrix, g_inv: Matrix) -> Matrix:
    """``g^{-1} a g``."""
    return g_inv @ a @ g


def from_columns(columns: Sequence[Sequence]) -> Matrix:
    return Matrix(zip(*columns))


def scale_of(field: Field, *mats: Matrix):
    return field.scale_of([x for a in mats for x in a.entries()])


def is_zero_matrix(a: Matrix, field: Field, scale=None) -> bool:
    return all(field.is_zero(x, scale) for x in a.entries())


def matrices_close(a: Matrix, b: Matrix, field: Field, scale=None) -> bool:
    if scale is None:
        scale = scale_of(field, a, b)
    return is_zero_matrix(a - b, field, scale)


def is_triangular(a: Matrix, flavor: str, field: Field, scale=None) -> bool:
    """True when the entries strictly on the opposite side of ``flavor`` vanish."""
    n = a.m
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            below = i > j
            if flavor == UPPER and not below:
                continue
            if flavor == LOWER and below:
                continue
            if not field.is_zero(a.rows[i][j], scale):
                return False
    return True


# --- subalgebra projections -------------------------------------------------


def part_diagonal(a: Matrix, field: Field) -> Matrix:
    zero = field.zero
    return Matrix([[x if i == j else zero for j, x in enumerate(r)] for i, r in enumerate(a.rows)])


def part_strict_lower(a: Matrix, field: Field) -> Matrix:
    zero = field.zero
    return Matrix([[x if i > j else zero for j, x in enumerate(r)] for i, r in enumerate(a.rows)])


def part_strict_upper(a: Matrix, field: Field) -> Matrix:
    zero = field.zero
    return Matrix([[x if i < j else zero for j, x in enumerate(r)] for i, r in enumerate(a.rows)])


# --- echelon machinery ------------------------------------------------------


def _eliminate(rows: list, npiv: int, field: Field, scale) -> list:
    """Reduce ``rows`` in place to RREF over the first ``npiv`` columns.

    Returns the pivot column of each leading row.  Exact modes take the first
    nonzero candidate; floating modes take the largest in magnitude.  The
    pivot pattern is fixed by the zero test, but every nonzero entry is
    eliminated exactly, so dual parts stay first-order correct.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    zero = field.zero
    for c in range(npiv):
        if r >= nrows:
            break
        best = None
        if field.exact:
            for i in range(r, nrows):
                if not field.is_zero(rows[i][c], scale):
                    best = i
                    break
        else:
            best_mag = -1.0
            for i in range(r, nrows):
                x = rows[i][c]
                if field.is_zero(x, scale):
                    continue
                mag = field.magnitude(x)
                if mag > best_mag:
                    best, best_mag = i, mag
        if best is None:
            # no pivot by the zero test; entries are kept (dual parts matter)
            continue
        if best != r:
            rows[r], rows[best] = rows[best], rows[r]
        prow = rows[r]
        inv = field.one / prow[c]
        prow = [x * inv for x in prow]
        prow[c] = field.one
        rows[r] = prow
        nz = [k for k in range(ncols) if k != c and prow[k] != 0]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f == 0:
                continue
            for k in nz:
                row[k] = row[k] - f * prow[k]
            row[c] = zero
        pivots.append(c)
        r += 1
    return pivots


def rref(a: Matrix, field: Field, scale=None) -> tuple[Matrix, list]:
    """Row-reduced echelon form and pivot columns."""
    if scale is None:
        scale = scale_of(field, a)
    rows = [list(r) for r in a.rows]
    pivots = _eliminate(rows, a.ncols, field, scale)
    return Matrix(rows), pivots


def rank(a: Matrix, field: Field, scale=None) -> int:
    """Exact rank in exact mode; tolerance-based (scaled by max entry) otherwise."""
    if a.nrows == 0:
        return 0
    return len(rref(a, field, scale)[1])


def nullspace(a: Matrix, field: Field, scale=None) -> list[tuple]:
    """Echelon basis of ker(a): one vector per free column, that column set to 1."""
    if scale is None:
        scale = scale_of(field, a)
    rows = [list(r) for r in a.rows]
    pivots = _eliminate(rows, a.ncols, field, scale)
    pivset = set(pivots)
    basis = []
    zero, one = field.zero, field.one
    for f in range(a.ncols):
        if f in pivset:
            continue
        v = [zero] * a.ncols
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        basis.append(tuple(v))
    return basis


def kernel_with_nullity(a: Matrix, field: Field, nullity: int, scale=None) -> list[tuple]:
    """Kernel basis when the nullity is known in advance.

    Exact modes return :func:`nullspace` unchanged (callers compare its length
    with ``nullity``).  Floating modes run complete pivoting for exactly
    ``ncols - nullity`` steps and treat the remainder as zero, which is far
    more robust than a rank decision on an ill-conditioned matrix; callers
    should check the residual.
    """
    if field.exact:
        return nullspace(a, field, scale)
    n = a.ncols
    steps = n - nullity
    rows = [list(r) for r in a.rows]
    nrows = len(rows)
    free = list(range(n))
    pivots = []
    for r in range(min(steps, nrows)):
        best, best_mag = None, -1.0
        for i in range(r, nrows):
            for c in free:
                mag = field.magnitude(rows[i][c])
                if mag > best_mag:
                    best, best_mag = (i, c), mag
        i, c = best
        if best_mag == 0.0:
            break
        rows[r], rows[i] = rows[i], rows[r]
        inv = field.one / rows[r][c]
        prow = [x * inv for x in rows[r]]
        prow[c] = field.one
        rows[r] = prow
        for k in range(nrows):
            if k == r:
                continue
            f = rows[k][c]
            if f == 0:
                continue
            rows[k] = [x - f * y for x, y in zip(rows[k], prow)]
            rows[k][c] = field.zero
        free.remove(c)
        pivots.append(c)
    basis = []
    for f in free:
        v = [field.zero] * n
        v[f] = field.one
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        basis.append(tuple(v))
    return basis


def residual_ratio(a: Matrix, v, field: Field) -> float:
    """``|a v| / (|a| |v|)`` in max norms (0 for a zero matrix or vector)."""
    av = a.apply(v)
    na = max((field.magnitude(x) for x in a.entries()), default=0.0)
    nv = max((field.magnitude(x) for x in v), default=0.0)
    if na == 0.0 or nv == 0.0:
        return 0.0
    return max(field.magnitude(x) for x in av) / (na * nv)


def eigenspace_basis(a: Matrix, lam, field: Field, scale=None) -> list[tuple]:
    """Basis of ker(a - lam I); ``lam`` is caller-supplied, never computed."""
    if scale is None:
        scale = scale_of(field, a)
    return nullspace(shift(a, lam), field, scale)


def shift(a: Matrix, lam) -> Matrix:
    """``a - lam I``."""
    return Matrix(
        [[x - lam if i == j else x for j, x in enumerate(r)] for i, r in enumerate(a.rows)]
    )


def solve_consistent(a: Matrix, b: Sequence, field: Field, scale=None, error=InconsistentSystem):
    """A solution of ``a x = b`` with free variables set to zero.

    Raises ``error`` if the system is inconsistent.
    """
    if scale is None:
        scale = field.scale_of([x for x in a.entries()] + list(b))
    rows = [list(r) + [bi] for r, bi in zip(a.rows, b)]
    pivots = _eliminate(rows, a.ncols, field, scale)
    for i in range(len(pivots), len(rows)):
        if not field.is_zero(rows[i][-1], scale):
            raise error("linear system is inconsistent")
    x = [field.zero] * a.ncols
    for i, p in enumerate(pivots):
        x[p] = rows[i][-1]
    return tuple(x)


def linear_solve(a: Matrix, b: Sequence, field: Field, scale=None) -> tuple:
    """Unique solution of the square system ``a x = b``."""
    if scale is None:
        scale = field.scale_of([x for x in a.entries()] + list(b))
    rows = [list(r) + [bi] for r, bi in zip(a.rows, b)]
    pivots = _eliminate(rows, a.ncols, field, scale)
    if len(pivots) < a.ncols:
        raise SingularMatrix("matrix is singular")
    return tuple(rows[i][-1] for i in range(a.ncols))


def inverse(a: Matrix, field: Field, scale=None) -> Matrix:
    """Gauss-Jordan inverse."""
    n = a.m
    if scale is None:
        scale = scale_of(field, a)
    zero, one = field.zero, field.one
    rows = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a.rows)]
    pivots = _eliminate(rows, n, field, scale)
    if len(pivots) < n:
        raise SingularMatrix("matrix is singular")
    return Matrix([r[n:] for r in rows])


def triangular_inverse(t: Matrix, field: Field, flavor: str | None = None, scale=None) -> Matrix:
    """Inverse of a triangular matrix by substitution (flavor inferred if omitted)."""
    n = t.m
    if scale is None:
        scale = scale_of(field, t)
    if flavor is None:
        if is_triangular(t, UPPER, field, scale):
            flavor = UPPER
        elif is_triangular(t, LOWER, field, scale):
            flavor = LOWER
        else:
            raise ValueError("matrix is not triangular")
    if flavor == LOWER:
        # L^{-1} = ((L^T)^{-1})^T
        return triangular_inverse(t.transpose(), field, UPPER, scale).transpose()
    for i in range(n):
        if field.is_zero(t.rows[i][i], scale):
            raise SingularMatrix("zero on the diagonal of a triangular matrix")
    zero = field.zero
    inv = [[zero] * n for _ in range(n)]
    for j in range(n):
        # column j of the inverse by back substitution on U x = e_j
        for i in range(j, -1, -1):
            acc = field.one if i == j else zero
            for k in range(i + 1, j + 1):
                acc = acc - t.rows[i][k] * inv[k][j]
            inv[i][j] = acc / t.rows[i][i]
    return Matrix(inv)


# --- Gauss (UL) decomposition ----------------------------------------------


def gauss_ul_decompose(a: Matrix, field: Field, scale=None) -> tuple[Matrix, Matrix]:
    """Factor ``a = Phi_plus @ Phi_minus``: upper times unit-diagonal lower.

    The sweep runs from the bottom-right corner up, without row exchanges.
    The pivot at step ``p`` is the ratio of trailing principal minors of
    sizes ``m - p`` and ``m - p - 1``; if one vanishes, no such factorization
    exists and :class:`GaussObstruction` is raised.
    """
    n = a.m
    if scale is None:
        scale = scale_of(field, a)
    zero, one = field.zero, field.one
    r = [list(row) for row in a.rows]
    up = [[zero] * n for _ in range(n)]
    lo = [[zero] * n for _ in range(n)]
    for p in range(n - 1, -1, -1):
        piv = r[p][p]
        if field.is_zero(piv, scale):
            raise GaussObstruction(
                f"trailing principal minor of size {n - p} vanishes; "
                "no upper x lower factorization exists"
            )
        for i in range(p + 1):
            up[i][p] = r[i][p]
        lo[p][p] = one
        for j in range(p):
            lo[p][j] = r[p][j] / piv
        for i in range(p):
            uip = up[i][p]
            for j in range(p):
                r[i][j] = r[i][j] - uip * lo[p][j]
    return Matrix(up), Matrix(lo)


# --- ad_A solve ---------------------------------------------------------------


def ad_matrix(a: Matrix, field: Field) -> Matrix:
    """Matrix of ``U -> a U - U a`` on row-major vec(U)."""
    n = a.m
    zero = field.zero
    rows = []
    for i in range(n):
        for j in range(n):
            row = [zero] * (n * n)
            for k in range(n):
                row[k * n + j] = row[k * n + j] + a.rows[i][k]
                row[i * n + k] = row[i * n + k] - a.rows[k][j]
            rows.append(row)
    return Matrix(rows)


def vec(a: Matrix) -> tuple:
    return tuple(a.entries())


def unvec(v: Sequence, n: int) -> Matrix:
    return Matrix([v[i * n:(i + 1) * n] for i in range(n)])


def solve_bracket(a: Matrix, xi: Matrix, field: Field, scale=None) -> Matrix:
    """Some ``U`` with ``a U - U a = xi`` (free variables of the echelon solve zero).

    Raises :class:`NotInTangentSpace` if ``xi`` is not in the image of ad_a.
    """
    n = a.m
    if scale is None:
        scale = scale_of(field, a, xi)
    sol = solve_consistent(ad_matrix(a, field), vec(xi), field, scale, error=NotInTangentSpace)
    return unvec(sol, n)


def charpoly(a: Matrix, field: Field) -> tuple:
    """Coefficients ``(1, c_1, ..., c_m)`` of det(x I - a) (Faddeev-LeVerrier)."""
    n = a.m
    coeffs = [field.one]
    ident = Matrix.identity(n, field)
    mk = Matrix.zeros(n, n, field)
    c = field.one
    for k in range(1, n + 1):
        mk = a @ mk + ident.scale(c)
        c = -(a @ mk).trace() / field.coerce(k)
        coeffs.append(c)
    return tuple(coeffs)
