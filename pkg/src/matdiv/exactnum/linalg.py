"""Exact dense linear algebra over Gaussian rationals.

Matrices are tuples of row tuples.  Every function here is pure; inputs may be
any nested sequence of ints, Fractions or Scalars.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import DimensionError
from .scalar import ONE, ZERO, Scalar, as_scalar

Matrix = tuple  # tuple[tuple[Scalar, ...], ...]
Vector = tuple  # tuple[Scalar, ...]

__all__ = [
    "to_matrix",
    "zeros",
    "identity",
    "matmul",
    "matvec",
    "matadd",
    "matsub",
    "matscale",
    "transpose",
    "commutator",
    "is_zero_matrix",
    "flatten",
    "unflatten",
    "rref",
    "rank",
    "nullspace",
    "inverse",
    "SubspaceBasis",
    "span",
    "subspace_sum",
    "subspace_intersect",
    "subspace_contains",
]


def to_matrix(rows) -> Matrix:
    return tuple(tuple(as_scalar(x) for x in row) for row in rows)


def zeros(m: int, n: int) -> Matrix:
    return tuple((ZERO,) * n for _ in range(m))


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return ()
    if len(a[0]) != len(b):
        raise DimensionError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x?")
    if not b:
        return tuple(() for _ in a)
    ncols = len(b[0])
    out = []
    for row in a:
        acc = [ZERO] * ncols
        for aik, brow in zip(row, b):
            if aik:
                for j, bkj in enumerate(brow):
                    if bkj:
                        acc[j] = acc[j] + aik * bkj
        out.append(tuple(acc))
    return tuple(out)


def matvec(a: Matrix, v: Sequence) -> Vector:
    out = []
    for row in a:
        acc = ZERO
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return tuple(out)


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def matsub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def matscale(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return matsub(matmul(a, b), matmul(b, a))


def is_zero_matrix(a: Matrix) -> bool:
    return not any(x for row in a for x in row)


def flatten(a: Matrix) -> Vector:
    return tuple(x for row in a for x in row)


def unflatten(v: Sequence, rows: int, cols: int) -> Matrix:
    return tuple(tuple(v[i * cols:(i + 1) * cols]) for i in range(rows))


def rref(matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row-echelon form.

    Returns ``(reduced, rank, pivots)``; ``reduced`` has the same shape as the
    input with zero rows at the bottom.
    """
    rows = [list(as_scalar(x) for x in row) for row in matrix]
    if not rows or not rows[0]:
        return tuple(tuple(r) for r in rows), 0, []
    m, n = len(rows), len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r]
        inv = piv[c].inverse()
        if inv != 1:
            piv = [x * inv if x else x for x in piv]
            rows[r] = piv
        nz = [j for j in range(c, n) if piv[j]]
        for i in range(m):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in nz:
                        row[j] = row[j] - f * piv[j]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in rows), r, pivots


def rank(matrix) -> int:
    return rref(matrix)[1]


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of ``Scalar^ambient_dim`` stored by its unique RREF basis.

    Equality of two instances is equality of subspaces.
    """

    ambient_dim: int
    basis: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return len(self.basis) == self.ambient_dim

    def contains_vector(self, v: Sequence) -> bool:
        v = tuple(as_scalar(x) for x in v)
        if len(v) != self.ambient_dim:
            raise DimensionError("vector length does not match ambient dimension")
        if not any(v):
            return True
        return rank(self.basis + (v,)) == self.dim

    def annihilator(self) -> tuple:
        """Rows spanning the linear functionals vanishing on the subspace."""
        if not self.basis:
            return identity(self.ambient_dim)
        return nullspace(self.basis).basis

    def image(self, a: Matrix) -> "SubspaceBasis":
        return span((matvec(a, v) for v in self.basis), len(a))

    def __str__(self):
        rows = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.basis)
        return f"<{rows}> in dim {self.ambient_dim}"


def span(vectors: Iterable[Sequence], ambient_dim: int) -> SubspaceBasis:
    vecs = []
    for v in vectors:
        v = tuple(as_scalar(x) for x in v)
        if len(v) != ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        if any(v):
            vecs.append(v)
    if not vecs:
        return SubspaceBasis(ambient_dim, ())
    reduced, r, _ = rref(vecs)
    return SubspaceBasis(ambient_dim, reduced[:r])


def full_space(n: int) -> SubspaceBasis:
    return SubspaceBasis(n, identity(n))


def zero_space(n: int) -> SubspaceBasis:
    return SubspaceBasis(n, ())


def nullspace(matrix) -> SubspaceBasis:
    """Basis of ``{x : A x = 0}``; rank + nullity = number of columns."""
    matrix = tuple(matrix)
    if not matrix:
        raise DimensionError("nullspace of a matrix with no rows needs an explicit column count")
    n = len(matrix[0])
    reduced, r, pivots = rref(matrix)
    free = [j for j in range(n) if j not in set(pivots)]
    vecs = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        vecs.append(v)
    return span(vecs, n)


def nullspace_cols(matrix, ncols: int) -> SubspaceBasis:
    """Like :func:`nullspace` but tolerates an empty row list."""
    matrix = tuple(matrix)
    if not matrix:
        return full_space(ncols)
    return nullspace(matrix)


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [tuple(row) + e for row, e in zip(to_matrix(a), identity(n))]
    reduced, r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(row[n:] for row in reduced[:n])


def _check(a: SubspaceBasis, b: SubspaceBasis) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    _check(a, b)
    return span(a.basis + b.basis, a.ambient_dim)


def subspace_intersect(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    # x = sum c_i a_i = sum d_j b_j  <=>  (c, -d) in null([A^T | -B^T])
    _check(a, b)
    n = a.ambient_dim
    if not a.basis or not b.basis:
        return zero_space(n)
    cols = list(a.basis) + [tuple(-x for x in v) for v in b.basis]
    system = transpose(cols)
    null = nullspace(system)
    vecs = []
    for coeffs in null.basis:
        v = [ZERO] * n
        for c, av in zip(coeffs[: a.dim], a.basis):
            if c:
                for k in range(n):
                    v[k] = v[k] + c * av[k]
        vecs.append(v)
    return span(vecs, n)


def subspace_contains(a: SubspaceBasis, b: SubspaceBasis) -> bool:
    """True iff ``b`` is a subspace of ``a``."""
    _check(a, b)
    if b.dim > a.dim:
        return False
    return rank(a.basis + b.basis) == a.dim if b.basis else True
