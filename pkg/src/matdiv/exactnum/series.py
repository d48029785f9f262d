"""Truncated Laurent series, scalar- and matrix-valued.

A series is known on a window of degrees ``[start, order)``: coefficients below
``start`` are zero, coefficients at ``order`` and beyond are unknown.
``order=None`` marks an exact (finite) Laurent polynomial.  Arithmetic tracks
the window pessimistically; no operation reports a coefficient it cannot
certify.

The module also hosts the elimination engine over the ring of Taylor series
(:func:`series_smith`): pivoting on an entry of minimal valuation, it brings a
square matrix series to ``diag(z^d_1, ..., z^d_n)`` by invertible row and
column operations.  :func:`series_invert` is built on top of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import DimensionError, InsufficientPrecisionError
from .linalg import identity as const_identity
from .linalg import inverse as const_inverse
from .linalg import is_zero_matrix, matadd, matmul, zeros
from .scalar import ONE, ZERO, as_scalar

__all__ = [
    "TruncatedLaurentSeries",
    "TruncatedMatrixSeries",
    "series_smith",
    "series_invert",
    "DEFAULT_EXACT_TERMS",
]

# Number of terms kept when inverting an exact polynomial that is not a monomial.
DEFAULT_EXACT_TERMS = 16


def _min_order(*orders):
    known = [o for o in orders if o is not None]
    return min(known) if known else None


class TruncatedLaurentSeries:
    """Scalar Laurent series ``sum c_j z^j`` known for degrees below ``order``."""

    __slots__ = ("start", "coeffs", "order")

    def __init__(self, coeffs: Sequence = (), start: int = 0, order: int | None = None):
        cs = [as_scalar(c) for c in coeffs]
        if order is not None:
            cs = cs[: max(0, order - start)]
        k = 0
        while k < len(cs) and not cs[k]:
            k += 1
        cs = cs[k:]
        start += k
        while cs and not cs[-1]:
            cs.pop()
        if not cs:
            start = order if order is not None else 0
        self.start = start
        self.coeffs = tuple(cs)
        self.order = order

    # -- constructors
    @classmethod
    def monomial(cls, degree: int, c=1) -> "TruncatedLaurentSeries":
        return cls((c,), degree, None)

    @classmethod
    def zero(cls, order: int | None = None) -> "TruncatedLaurentSeries":
        return cls((), 0 if order is None else order, order)

    # -- window accessors
    @property
    def valuation(self) -> int:
        """Degree of the first nonzero coefficient (for a zero series: ``order``)."""
        return self.start

    @property
    def precision(self) -> int | None:
        return None if self.order is None else self.order - self.start

    def is_exact(self) -> bool:
        return self.order is None

    def is_zero(self) -> bool:
        """True when no known coefficient is nonzero."""
        return not self.coeffs

    def __getitem__(self, degree: int):
        return self.coefficient(degree)

    def coefficient(self, degree: int):
        if self.order is not None and degree >= self.order:
            raise InsufficientPrecisionError(
                f"coefficient of z^{degree} is beyond the known window (order {self.order})",
                needed=degree - self.order + 1,
            )
        k = degree - self.start
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, TruncatedLaurentSeries):
            other = TruncatedLaurentSeries((other,), 0, None)
        order = _min_order(self.order, other.order)
        if not self.coeffs:
            return TruncatedLaurentSeries(other.coeffs, other.start, order)
        if not other.coeffs:
            return TruncatedLaurentSeries(self.coeffs, self.start, order)
        lo = min(self.start, other.start)
        hi = max(self.start + len(self.coeffs), other.start + len(other.coeffs))
        out = [ZERO] * (hi - lo)
        for k, c in enumerate(self.coeffs):
            out[self.start - lo + k] = c
        for k, c in enumerate(other.coeffs):
            out[other.start - lo + k] = out[other.start - lo + k] + c
        return TruncatedLaurentSeries(out, lo, order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedLaurentSeries([-c for c in self.coeffs], self.start, self.order)

    def __sub__(self, other):
        if not isinstance(other, TruncatedLaurentSeries):
            other = TruncatedLaurentSeries((other,), 0, None)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedLaurentSeries":
        c = as_scalar(c)
        return TruncatedLaurentSeries([c * x for x in self.coeffs], self.start, self.order)

    def shift(self, k: int) -> "TruncatedLaurentSeries":
        """Multiply by ``z^k``."""
        return TruncatedLaurentSeries(
            self.coeffs, self.start + k, None if self.order is None else self.order + k
        )

    def __mul__(self, other):
        if not isinstance(other, TruncatedLaurentSeries):
            return self.scale(other)
        if (not self.coeffs and self.order is None) or (not other.coeffs and other.order is None):
            return TruncatedLaurentSeries.zero()
        # an unknown tail of one factor only reaches degrees >= its order + other's start
        order = _min_order(
            None if self.order is None else self.order + other.start,
            None if other.order is None else other.order + self.start,
        )
        start = self.start + other.start
        if not self.coeffs or not other.coeffs:
            return TruncatedLaurentSeries((), start, order)
        n = len(self.coeffs) + len(other.coeffs) - 1
        if order is not None:
            n = min(n, max(0, order - start))
        out = [ZERO] * n
        for i, a in enumerate(self.coeffs):
            if i >= n:
                break
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= n:
                    break
                if b:
                    out[i + j] = out[i + j] + a * b
        return TruncatedLaurentSeries(out, start, order)

    __rmul__ = __mul__

    def truncate(self, order: int) -> "TruncatedLaurentSeries":
        return TruncatedLaurentSeries(self.coeffs, self.start, _min_order(order, self.order))

    def inverse(self, terms: int = DEFAULT_EXACT_TERMS) -> "TruncatedLaurentSeries":
        """Multiplicative inverse.

        The relative precision is preserved.  For an exact non-monomial input,
        ``terms`` coefficients of the (infinite) inverse are produced.
        """
        if not self.coeffs:
            raise InsufficientPrecisionError(
                "cannot invert a series with no known nonzero coefficient", needed=1
            )
        v = self.start
        if self.order is None:
            if len(self.coeffs) == 1:
                return TruncatedLaurentSeries((self.coeffs[0].inverse(),), -v, None)
            p = terms
        else:
            p = self.order - v
        c = self.coeffs
        inv0 = c[0].inverse()
        out = [inv0]
        for j in range(1, p):
            acc = ZERO
            for i in range(1, min(j, len(c) - 1) + 1):
                if c[i]:
                    acc = acc + c[i] * out[j - i]
            out.append(-inv0 * acc)
        return TruncatedLaurentSeries(out, -v, -v + p)

    def __eq__(self, other):
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        return (self.start, self.coeffs, self.order) == (other.start, other.coeffs, other.order)

    def __hash__(self):
        return hash((self.start, self.coeffs, self.order))

    def __repr__(self):
        terms = " + ".join(f"({c})z^{self.start + k}" for k, c in enumerate(self.coeffs) if c)
        tail = "" if self.order is None else f" + O(z^{self.order})"
        return f"<{terms or '0'}{tail}>"


@dataclass(frozen=True, eq=True)
class TruncatedMatrixSeries:
    """Matrix Laurent series with a common window ``[low, order)``.

    ``coeffs[j]`` is the matrix coefficient of ``z^(low + j)``; ``order=None``
    means the series is an exact Laurent polynomial.
    """

    rows: int
    cols: int
    low: int
    coeffs: tuple
    order: int | None

    @classmethod
    def build(cls, coeffs: Sequence, low: int = 0, order: int | None = None,
              shape: tuple[int, int] | None = None) -> "TruncatedMatrixSeries":
        mats = [tuple(tuple(as_scalar(x) for x in row) for row in m) for m in coeffs]
        if shape is None:
            if not mats:
                raise DimensionError("shape is required for an empty coefficient list")
            shape = (len(mats[0]), len(mats[0][0]) if mats[0] else 0)
        r, c = shape
        for m in mats:
            if len(m) != r or any(len(row) != c for row in m):
                raise DimensionError("coefficient matrices have inconsistent shapes")
        if order is not None:
            mats = mats[: max(0, order - low)]
        k = 0
        while k < len(mats) and is_zero_matrix(mats[k]):
            k += 1
        mats = mats[k:]
        low += k
        while mats and is_zero_matrix(mats[-1]):
            mats.pop()
        if not mats:
            low = order if order is not None else 0
        return cls(r, c, low, tuple(mats), order)

    @classmethod
    def constant(cls, m, order: int | None = None) -> "TruncatedMatrixSeries":
        return cls.build([m], 0, order)

    @classmethod
    def identity(cls, n: int, order: int | None = None) -> "TruncatedMatrixSeries":
        return cls.build([const_identity(n)], 0, order)

    @classmethod
    def diagonal_monomials(cls, exponents: Sequence[int], scalars=None) -> "TruncatedMatrixSeries":
        """Exact ``diag(c_1 z^e_1, ..., c_n z^e_n)``."""
        n = len(exponents)
        grid = [[TruncatedLaurentSeries.zero() for _ in range(n)] for _ in range(n)]
        for i, e in enumerate(exponents):
            grid[i][i] = TruncatedLaurentSeries.monomial(e, ONE if scalars is None else scalars[i])
        return cls.from_grid(grid)

    @classmethod
    def from_grid(cls, grid) -> "TruncatedMatrixSeries":
        r = len(grid)
        c = len(grid[0]) if r else 0
        entries = [e for row in grid for e in row]
        order = _min_order(*(e.order for e in entries)) if entries else None
        nonzero = [e for e in entries if e.coeffs]
        if not nonzero:
            return cls.build([], 0 if order is None else order, order, shape=(r, c))
        low = min(e.start for e in nonzero)
        hi = max(e.start + len(e.coeffs) for e in nonzero)
        if order is not None:
            hi = min(hi, order)
        mats = []
        for d in range(low, max(low, hi)):
            mats.append(tuple(tuple(_coef(e, d) for e in row) for row in grid))
        return cls.build(mats, low, order, shape=(r, c))

    # -- accessors
    @property
    def valuation(self) -> int:
        return self.low

    @property
    def precision(self) -> int | None:
        return None if self.order is None else self.order - self.low

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_square(self) -> bool:
        return self.rows == self.cols

    def coefficient(self, degree: int):
        if self.order is not None and degree >= self.order:
            raise InsufficientPrecisionError(
                f"coefficient of z^{degree} is beyond the known window (order {self.order})",
                needed=degree - self.order + 1,
            )
        k = degree - self.low
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return zeros(self.rows, self.cols)

    def coefficients(self, lo: int, hi: int) -> list:
        """Coefficient matrices for degrees ``lo..hi`` inclusive."""
        return [self.coefficient(d) for d in range(lo, hi + 1)]

    def entry(self, i: int, j: int) -> TruncatedLaurentSeries:
        return TruncatedLaurentSeries([m[i][j] for m in self.coeffs], self.low, self.order)

    def to_grid(self) -> list:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    # -- arithmetic
    def __add__(self, other: "TruncatedMatrixSeries") -> "TruncatedMatrixSeries":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in series addition")
        order = _min_order(self.order, other.order)
        if not self.coeffs:
            return TruncatedMatrixSeries.build(other.coeffs, other.low, order, self.shape)
        if not other.coeffs:
            return TruncatedMatrixSeries.build(self.coeffs, self.low, order, self.shape)
        lo = min(self.low, other.low)
        hi = max(self.low + len(self.coeffs), other.low + len(other.coeffs))
        if order is not None:
            hi = min(hi, order)
        mats = [matadd(self.coefficient(d), other.coefficient(d)) for d in range(lo, hi)]
        return TruncatedMatrixSeries.build(mats, lo, order, self.shape)

    def __neg__(self):
        return TruncatedMatrixSeries.build(
            [tuple(tuple(-x for x in row) for row in m) for m in self.coeffs],
            self.low, self.order, self.shape,
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncatedMatrixSeries":
        c = as_scalar(c)
        return TruncatedMatrixSeries.build(
            [tuple(tuple(c * x for x in row) for row in m) for m in self.coeffs],
            self.low, self.order, self.shape,
        )

    def shift(self, k: int) -> "TruncatedMatrixSeries":
        return TruncatedMatrixSeries(self.rows, self.cols, self.low + k, self.coeffs,
                                     None if self.order is None else self.order + k)

    def truncate(self, order: int) -> "TruncatedMatrixSeries":
        return TruncatedMatrixSeries.build(self.coeffs, self.low,
                                           _min_order(order, self.order), self.shape)

    def __matmul__(self, other: "TruncatedMatrixSeries") -> "TruncatedMatrixSeries":
        if self.cols != other.rows:
            raise DimensionError("shape mismatch in series product")
        shape = (self.rows, other.cols)
        if (not self.coeffs and self.order is None) or (not other.coeffs and other.order is None):
            return TruncatedMatrixSeries.build([], 0, None, shape)
        order = _min_order(
            None if self.order is None else self.order + other.low,
            None if other.order is None else other.order + self.low,
        )
        low = self.low + other.low
        shape = (self.rows, other.cols)
        if not self.coeffs or not other.coeffs:
            return TruncatedMatrixSeries.build([], low if order is None else order, order, shape)
        n = len(self.coeffs) + len(other.coeffs) - 1
        if order is not None:
            n = min(n, max(0, order - low))
        out = [None] * n
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                if i + j >= n:
                    break
                p = matmul(a, b)
                out[i + j] = p if out[i + j] is None else matadd(out[i + j], p)
        out = [m if m is not None else zeros(*shape) for m in out]
        return TruncatedMatrixSeries.build(out, low, order, shape)

    __mul__ = __matmul__

    def agrees_with(self, other: "TruncatedMatrixSeries") -> bool:
        """Equality on the common known window."""
        if self.shape != other.shape:
            return False
        order = _min_order(self.order, other.order)
        lo = min(self.low, other.low)
        hi = max(self.low + len(self.coeffs), other.low + len(other.coeffs))
        if order is not None:
            hi = min(hi, order)
        return all(self.coefficient(d) == other.coefficient(d) for d in range(lo, hi))

    def __repr__(self):
        tail = "" if self.order is None else f", O(z^{self.order})"
        return f"TruncatedMatrixSeries({self.rows}x{self.cols}, low={self.low}, {len(self.coeffs)} terms{tail})"


def _coef(e: TruncatedLaurentSeries, d: int):
    k = d - e.start
    if 0 <= k < len(e.coeffs):
        return e.coeffs[k]
    return ZERO


def _grid_identity(n: int):
    return [[TruncatedLaurentSeries.monomial(0) if i == j else TruncatedLaurentSeries.zero()
             for j in range(n)] for i in range(n)]


def series_smith(m: TruncatedMatrixSeries, terms: int = DEFAULT_EXACT_TERMS):
    """Diagonalize a square matrix series over the ring of Taylor series.

    Returns ``(U, exponents, V)`` with ``U @ m @ V == diag(z^e_1, ..., z^e_n)`` on
    the surviving window; ``U`` and ``V`` have valuation 0 and invertible
    constant terms.  Pivots are entries of minimal valuation, ties broken
    row-major, so ``exponents`` come out nondecreasing.

    Raises :class:`InsufficientPrecisionError` when a remaining block carries no
    certified nonzero entry (singular within the available precision).
    """
    if not m.is_square():
        raise DimensionError("Smith reduction needs a square matrix")
    n = m.rows
    a = m.to_grid()
    u = _grid_identity(n)
    v = _grid_identity(n)
    exps: list[int] = []
    for t in range(n):
        best = None
        for i in range(t, n):
            for j in range(t, n):
                e = a[i][j]
                if e.coeffs and (best is None or e.start < a[best[0]][best[1]].start):
                    best = (i, j)
        if best is None:
            orders = [a[i][j].order for i in range(t, n) for j in range(t, n)]
            raise InsufficientPrecisionError(
                f"insufficient precision or singular: no certified pivot among the last "
                f"{n - t} rows/columns (known up to z^{_min_order(*orders)})",
                needed=1,
            )
        bi, bj = best
        a[t], a[bi] = a[bi], a[t]
        u[t], u[bi] = u[bi], u[t]
        for row in a:
            row[t], row[bj] = row[bj], row[t]
        for row in v:
            row[t], row[bj] = row[bj], row[t]
        piv = a[t][t]
        d = piv.start
        unit_inv = piv.shift(-d).inverse(terms)
        for i in range(t + 1, n):
            if a[i][t].coeffs or a[i][t].order is not None:
                q = a[i][t].shift(-d) * unit_inv
                if q.coeffs or q.order is not None:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
        for j in range(t + 1, n):
            if a[t][j].coeffs or a[t][j].order is not None:
                q = a[t][j].shift(-d) * unit_inv
                if q.coeffs or q.order is not None:
                    for row in a:
                        row[j] = row[j] - row[t] * q
                    for row in v:
                        row[j] = row[j] - row[t] * q
        a[t] = [x * unit_inv for x in a[t]]
        u[t] = [x * unit_inv for x in u[t]]
        exps.append(d)
    return TruncatedMatrixSeries.from_grid(u), exps, TruncatedMatrixSeries.from_grid(v)


def _invert_regular(m: TruncatedMatrixSeries, terms: int) -> TruncatedMatrixSeries:
    # m = z^low (M0 + M1 z + ...), M0 invertible
    n = m.rows
    c = m.coeffs
    inv0 = const_inverse(c[0])
    p = terms if m.order is None else m.order - m.low
    if m.order is None and len(c) == 1:
        return TruncatedMatrixSeries.build([inv0], -m.low, None, (n, n))
    out = [inv0]
    for j in range(1, p):
        acc = zeros(n, n)
        for i in range(1, min(j, len(c) - 1) + 1):
            acc = matadd(acc, matmul(c[i], out[j - i]))
        out.append(tuple(tuple(-x for x in row) for row in matmul(inv0, acc)))
    return TruncatedMatrixSeries.build(out, -m.low, -m.low + p, (n, n))


def series_invert(m: TruncatedMatrixSeries, terms: int = DEFAULT_EXACT_TERMS) -> TruncatedMatrixSeries:
    """Inverse over the Laurent field, valid on the surviving window.

    ``valuation`` of the result is ``ord(m^-1)``.  Raises
    :class:`InsufficientPrecisionError` if ``m`` is singular within its
    precision.
    """
    if not m.is_square():
        raise DimensionError("only square series can be inverted")
    if not m.coeffs:
        raise InsufficientPrecisionError("insufficient precision or singular: zero series", needed=1)
    try:
        const_inverse(m.coeffs[0])
    except ZeroDivisionError:
        pass
    else:
        return _invert_regular(m, terms)
    u, exps, v = series_smith(m, terms)
    dinv = TruncatedMatrixSeries.diagonal_monomials([-e for e in exps])
    return v @ dinv @ u
