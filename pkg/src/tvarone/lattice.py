"""Exact integer and rational linear algebra for small dense matrices.

Everything here (and in the rest of the package) computes with Python ints
and `fractions.Fraction`; there are no floats and no tolerances.  Matrices
are immutable tuples of tuples, row-major.  All algorithms use fixed
deterministic pivoting so results are reproducible byte for byte.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

IntVector = tuple[int, ...]
IntMatrix = tuple[IntVector, ...]
RatVector = tuple[Fraction, ...]


class LatticeError(ValueError):
    """Raised for ill-posed exact linear algebra requests."""


def as_matrix(rows: Iterable[Sequence[int]]) -> IntMatrix:
    """Freeze `rows` into an IntMatrix, checking rectangularity."""
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if m and any(len(row) != len(m[0]) for row in m):
        raise LatticeError("matrix rows have unequal lengths")
    return m


def identity_matrix(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero_matrix(rows: int, cols: int) -> IntMatrix:
    return tuple((0,) * cols for _ in range(rows))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a and b and len(a[0]) != len(b):
        raise LatticeError("matrix shapes do not match")
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols))
        for i in range(len(a))
    )


def mat_vec(a: IntMatrix, v: Sequence) -> tuple:
    if a and len(a[0]) != len(v):
        raise LatticeError("matrix/vector shapes do not match")
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in a)


def vec_dot(u: Sequence, v: Sequence) -> object:
    if len(u) != len(v):
        raise LatticeError("vector lengths differ")
    return sum(a * b for a, b in zip(u, v))


def transpose(m: IntMatrix) -> IntMatrix:
    if not m:
        return ()
    return tuple(tuple(m[i][j] for i in range(len(m))) for j in range(len(m[0])))


def determinant(m: IntMatrix) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise LatticeError("determinant needs a square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(m)
    det = determinant(m)
    if det not in (1, -1):
        raise LatticeError("matrix is not unimodular")
    aug = [list(m[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    # Fraction-based Gauss-Jordan; the result is integral because det = +-1.
    work = [[Fraction(x) for x in row] for row in aug]
    for col in range(n):
        piv = next(i for i in range(col, n) if work[i][col] != 0)
        work[col], work[piv] = work[piv], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for i in range(n):
            if i != col and work[i][col] != 0:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[col])]
    out = tuple(tuple(int(x) for x in row[n:]) for row in work)
    return out


def primitive_vector(v: Sequence[int]) -> IntVector:
    """Divide an integer vector by the gcd of its entries, keeping direction."""
    vv = tuple(int(x) for x in v)
    g = 0
    for x in vv:
        g = gcd(g, x)
    if g == 0:
        raise LatticeError("the zero vector has no primitive representative")
    return tuple(x // g for x in vv)


def _swap_rows(a: list[list[int]], i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]


def _swap_cols(a: list[list[int]], i: int, j: int) -> None:
    for row in a:
        row[i], row[j] = row[j], row[i]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form with transforms: returns (S, U, V) with S = U*m*V.

    U and V are unimodular, S is diagonal with nonnegative entries
    satisfying the divisibility chain S[0][0] | S[1][1] | ...  The pivot
    rule (smallest absolute value, then lowest row, then lowest column)
    is fixed, so the output is deterministic.
    """
    m = as_matrix(m)
    rows, cols = len(m), len(m[0]) if m else 0
    a = [list(r) for r in m]
    u = [list(r) for r in identity_matrix(rows)]
    v = [list(r) for r in identity_matrix(cols)]
    t = 0
    while True:
        # Find the pivot among a[t:][t:].
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x != 0 and (pivot is None or abs(x) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            _swap_rows(a, t, pi)
            _swap_rows(u, t, pi)
        if pj != t:
            _swap_cols(a, t, pj)
            _swap_cols(v, t, pj)
        while True:
            # Clear the pivot column with row operations.
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] == 0:
                    continue
                q = a[i][t] // a[t][t]
                for j in range(cols):
                    a[i][j] -= q * a[t][j]
                for j in range(rows):
                    u[i][j] -= q * u[t][j]
                if a[i][t] != 0:
                    # Remainder became the smaller pivot: bring it up.
                    _swap_rows(a, t, i)
                    _swap_rows(u, t, i)
                    dirty = True
            if dirty:
                continue
            # Clear the pivot row with column operations.
            for j in range(t + 1, cols):
                if a[t][j] == 0:
                    continue
                q = a[t][j] // a[t][t]
                for i in range(rows):
                    a[i][j] -= q * a[i][t]
                for i in range(cols):
                    v[i][j] -= q * v[i][t]
                if a[t][j] != 0:
                    _swap_cols(a, t, j)
                    _swap_cols(v, t, j)
                    dirty = True
            if dirty:
                continue
            # Enforce divisibility: the pivot must divide the submatrix.
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            for j in range(cols):
                a[t][j] += a[offender][j]
            for j in range(rows):
                u[t][j] += u[offender][j]
        if a[t][t] < 0:
            for j in range(cols):
                a[t][j] = -a[t][j]
            for j in range(rows):
                u[t][j] = -u[t][j]
        t += 1
        if t == min(rows, cols):
            break
    S = tuple(tuple(r) for r in a)
    U = tuple(tuple(r) for r in u)
    V = tuple(tuple(r) for r in v)
    return S, U, V


def invariant_factors(m: IntMatrix) -> tuple[int, ...]:
    S, _, _ = smith_normal_form(m)
    d = min(len(S), len(S[0]) if S else 0)
    return tuple(S[i][i] for i in range(d) if S[i][i] != 0)


def hermite_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form: returns (H, U) with H = U*m.

    H is upper echelon with positive pivots; entries above each pivot are
    reduced into [0, pivot).  Zero rows sink to the bottom.  This is the
    canonical representative of the row span, used to make kernel bases
    reproducible.
    """
    m = as_matrix(m)
    rows, cols = len(m), len(m[0]) if m else 0
    a = [list(r) for r in m]
    u = [list(r) for r in identity_matrix(rows)]
    r = 0
    for col in range(cols):
        # Euclid on the column below the current row.
        while True:
            nz = [i for i in range(r, rows) if a[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(a[i][col]), i))
            if piv != r:
                _swap_rows(a, r, piv)
                _swap_rows(u, r, piv)
            done = True
            for i in range(r + 1, rows):
                if a[i][col] == 0:
                    continue
                q = a[i][col] // a[r][col]
                for j in range(cols):
                    a[i][j] -= q * a[r][j]
                for j in range(rows):
                    u[i][j] -= q * u[r][j]
                if a[i][col] != 0:
                    done = False
            if done:
                break
        if r < rows and a[r][col] != 0:
            if a[r][col] < 0:
                a[r] = [-x for x in a[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = a[i][col] // a[r][col]
                if q != 0:
                    for j in range(cols):
                        a[i][j] -= q * a[r][j]
                    for j in range(rows):
                        u[i][j] -= q * u[r][j]
            r += 1
            if r == rows:
                break
    H = tuple(tuple(row) for row in a)
    U = tuple(tuple(row) for row in u)
    return H, U


def row_space_basis(m: IntMatrix) -> IntMatrix:
    """Canonical basis (HNF rows, zero rows dropped) of the row lattice."""
    H, _ = hermite_normal_form(m)
    return tuple(row for row in H if any(row))


def integer_kernel(m: IntMatrix) -> IntMatrix:
    """Canonical basis of {x in Z^cols : m*x = 0}, as matrix rows.

    The output lattice is saturated (it is a direct summand of Z^cols) and
    is presented in Hermite normal form, so equal kernels compare equal.
    """
    m = as_matrix(m)
    if not m:
        raise LatticeError("kernel of an empty matrix is ambiguous; pass explicit shape via zero rows")
    cols = len(m[0])
    S, _, V = smith_normal_form(m)
    rank = sum(1 for i in range(min(len(S), cols)) if S[i][i] != 0)
    basis = tuple(tuple(V[i][j] for i in range(cols)) for j in range(rank, cols))
    return row_space_basis(basis) if basis else ()


def kernel_rank(m: IntMatrix) -> int:
    m = as_matrix(m)
    if not m:
        raise LatticeError("kernel of an empty matrix is ambiguous")
    cols = len(m[0])
    S, _, _ = smith_normal_form(m)
    rank = sum(1 for i in range(min(len(S), cols)) if S[i][i] != 0)
    return cols - rank


def lattice_reduce(v: Sequence[int], basis: IntMatrix) -> IntVector:
    """Canonical representative of `v` modulo the row lattice of `basis`.

    `basis` must be in HNF (as produced by row_space_basis).  Reduction
    subtracts multiples of each basis row so the coordinate at every pivot
    column lands in [0, pivot).
    """
    out = [int(x) for x in v]
    for row in basis:
        piv = next((j for j, x in enumerate(row) if x != 0), None)
        if piv is None:
            continue
        q = out[piv] // row[piv]
        if q != 0:
            for j in range(len(out)):
                out[j] -= q * row[j]
    return tuple(out)


class QuotientLattice:
    """A saturated sublattice L of Z^n with the quotient data Z^n / L.

    Attributes:
        ambient_rank: n.
        sub_basis: HNF basis of L (saturation of the generators' row span).
        projection: (n - rank L) x n integer matrix mapping Z^n onto the
            quotient written in canonical coordinates.
        dual_basis: basis of the dual of the quotient, written as functionals
            on Z^n; row i is the functional x -> projection(x)[i].
        section: right inverse of projection (projection @ section = id).
    """

    __slots__ = ("ambient_rank", "sub_basis", "projection", "dual_basis", "section", "rank")

    def __init__(self, ambient_rank: int, generators: IntMatrix):
        gens = as_matrix(generators)
        if any(len(row) != ambient_rank for row in gens):
            raise LatticeError("generators do not lie in the ambient lattice")
        self.ambient_rank = ambient_rank
        if ambient_rank == 0:
            self.sub_basis = ()
            self.projection = ()
            self.dual_basis = ()
            self.section = ()
            self.rank = 0
            return
        gt = transpose(gens) if gens else zero_matrix(ambient_rank, 1)
        S, U, _ = smith_normal_form(gt)
        sub_rank = sum(
            1 for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i] != 0
        )
        uinv = unimodular_inverse(U)
        sub_rows = tuple(
            tuple(uinv[i][j] for i in range(ambient_rank)) for j in range(sub_rank)
        )
        self.sub_basis = row_space_basis(sub_rows) if sub_rows else ()
        self.projection = tuple(U[i] for i in range(sub_rank, ambient_rank))
        self.dual_basis = self.projection
        self.section = tuple(
            tuple(uinv[i][j] for j in range(sub_rank, ambient_rank))
            for i in range(ambient_rank)
        )
        self.rank = ambient_rank - sub_rank

    def project(self, v: Sequence) -> tuple:
        """Image of an ambient vector in the quotient's canonical coordinates."""
        if len(v) != self.ambient_rank:
            raise LatticeError("vector has wrong ambient rank")
        return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in self.projection)

    def functional_coords(self, m: Sequence[int]) -> IntVector:
        """Write an ambient functional vanishing on L in dual_basis coordinates.

        Raises LatticeError if `m` does not descend to the quotient.
        """
        if len(m) != self.ambient_rank:
            raise LatticeError("functional has wrong ambient rank")
        coords = tuple(
            sum(m[i] * self.section[i][j] for i in range(self.ambient_rank))
            for j in range(self.rank)
        )
        back = tuple(
            sum(coords[i] * self.projection[i][j] for i in range(self.rank))
            for j in range(self.ambient_rank)
        )
        if back != tuple(int(x) for x in m):
            raise LatticeError("functional does not vanish on the sublattice")
        return coords

    def lift_functional(self, coords: Sequence[int]) -> IntVector:
        """Ambient functional representing quotient-dual coordinates."""
        if len(coords) != self.rank:
            raise LatticeError("coordinate vector has wrong rank")
        return tuple(
            sum(coords[i] * self.projection[i][j] for i in range(self.rank))
            for j in range(self.ambient_rank)
        )


def quotient_lattice(ambient_rank: int, generators: Iterable[Sequence[int]]) -> QuotientLattice:
    """Quotient of Z^ambient_rank by the saturation of the generators' span."""
    return QuotientLattice(ambient_rank, as_matrix(generators))


def rational_solve(a: Sequence[Sequence], b: Sequence) -> RatVector | None:
    """One exact solution x of a*x = b over Q, or None if inconsistent.

    Underdetermined systems return the solution with free variables set
    to zero (deterministic elimination order).
    """
    rows = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        x[col] = rows[i][ncols]
    return tuple(x)


def rational_nullspace(a: Sequence[Sequence]) -> tuple[RatVector, ...]:
    """Basis of the exact rational nullspace of `a` (row vectors x with a*x=0)."""
    ncols = len(a[0]) if a else 0
    rows = [[Fraction(x) for x in row] for row in a]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(tuple(v))
    return tuple(basis)


def clear_denominators(v: Sequence[Fraction]) -> IntVector:
    """Scale a rational vector by the lcm of denominators to a primitive integer vector."""
    fracs = [Fraction(x) for x in v]
    if all(x == 0 for x in fracs):
        raise LatticeError("cannot normalize the zero vector")
    lcm = 1
    for x in fracs:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fracs]
    return primitive_vector(ints)


def rational_rank(a: Sequence[Sequence]) -> int:
    ncols = len(a[0]) if a else 0
    rows = [[Fraction(x) for x in row] for row in a]
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r
