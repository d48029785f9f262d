"""Classical root systems and their matrix realizations.

Roots are integer vectors in the standard epsilon-coordinates.  The defining
modules of B/C/D use anti-diagonal invariant forms, so every Cartan element
is a diagonal matrix: with epsilon-coordinates ``(a_1, ..., a_l)`` the
so/sp Cartan element is ``diag(a_1, ..., a_l, [0], -a_l, ..., -a_1)``.

Supported realizations (``family``, ``module``):

* ``gl`` / ``A`` / ``B`` / ``C`` / ``D`` with ``defining``
* ``A`` rank 1 with ``adjoint``

Short tags such as ``"A1d"``, ``"A1adj"``, ``"C3d"`` or ``"gl2d"`` are accepted
by :func:`realization_from_tag`.
"""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

from .errors import ConfigurationError, DomainError
from .exactnum import linalg as la
from .exactnum.scalar import ONE, ZERO, Scalar

__all__ = [
    "RootSystem",
    "CoweightH",
    "RootSystemRealization",
    "WeightLattices",
    "build_root_system",
    "build_realization",
    "realization_from_tag",
    "pair",
    "dual_lattice_check",
    "weight_lattices",
]

FAMILIES = ("A", "B", "C", "D", "gl")


def _unit(n: int, i: int, c: int = 1) -> tuple:
    v = [0] * n
    v[i] = c
    return tuple(v)


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vneg(a):
    return tuple(-x for x in a)


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    roots: tuple
    positive_roots: tuple
    simple_roots: tuple

    @property
    def eps_dim(self) -> int:
        return len(self.simple_roots[0])

    def __contains__(self, root) -> bool:
        return tuple(root) in self._root_set

    @cached_property
    def _root_set(self):
        return frozenset(self.roots)

    def simple_coefficients(self, root) -> tuple:
        """Coordinates of ``root`` in the basis of simple roots."""
        cols = la.transpose(self.simple_roots)
        aug = [tuple(c) + (r,) for c, r in zip(cols, root)]
        red, rk, piv = la.rref(aug)
        l = len(self.simple_roots)
        if l in piv:
            raise DomainError(f"{root} is not in the span of the simple roots")
        out = []
        for i in range(l):
            c = red[i][l]
            out.append(c.re)
        return tuple(int(c) if c.denominator == 1 else c for c in out)


def build_root_system(family: str, rank: int) -> RootSystem:
    """Roots of A_l, B_l, C_l or D_l (``gl`` gives the A_{n-1} roots of gl(n))."""
    if family == "gl":
        if rank < 2:
            raise ConfigurationError("gl(n) needs n >= 2")
        return build_root_system("A", rank - 1)
    if family not in ("A", "B", "C", "D"):
        raise ConfigurationError(f"unsupported root-system family {family!r}")
    l = rank
    if l < 1 or (family == "D" and l < 2):
        raise ConfigurationError(f"unsupported rank {rank} for family {family}")
    pos: list[tuple] = []
    if family == "A":
        n = l + 1
        e = [_unit(n, i) for i in range(n)]
        pos = [_vadd(e[i], _vneg(e[j])) for i in range(n) for j in range(i + 1, n)]
        simple = [_vadd(e[i], _vneg(e[i + 1])) for i in range(l)]
    else:
        e = [_unit(l, i) for i in range(l)]
        for i in range(l):
            for j in range(i + 1, l):
                pos.append(_vadd(e[i], _vneg(e[j])))
                pos.append(_vadd(e[i], e[j]))
        simple = [_vadd(e[i], _vneg(e[i + 1])) for i in range(l - 1)]
        if family == "B":
            pos.extend(e)
            simple.append(e[l - 1])
        elif family == "C":
            pos.extend(_unit(l, i, 2) for i in range(l))
            simple.append(_unit(l, l - 1, 2))
        else:
            simple.append(_vadd(e[l - 2], e[l - 1]))
    pos = sorted(set(pos), reverse=True)
    roots = tuple(pos) + tuple(_vneg(r) for r in pos)
    return RootSystem(family, rank, roots, tuple(pos), tuple(simple))


@dataclass(frozen=True)
class CoweightH:
    """A Cartan element given by its epsilon-coordinates.

    For the defining module of gl(n)/sl(n) the coordinates are the diagonal
    entries; for so/sp they are the first ``l`` diagonal entries.
    """

    coords: tuple

    def __init__(self, coords: Sequence):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in coords))

    @classmethod
    def zero(cls, eps_dim: int) -> "CoweightH":
        return cls((0,) * eps_dim)

    @classmethod
    def from_simple_values(cls, root_system: RootSystem, values: Sequence[int]) -> "CoweightH":
        """Solve ``alpha_i(h) = values[i]``; for type A the coordinates sum to zero."""
        rs = root_system
        if len(values) != len(rs.simple_roots):
            raise DomainError("one value per simple root is required")
        rows = [tuple(r) + (v,) for r, v in zip(rs.simple_roots, values)]
        if rs.family == "A":
            rows.append((1,) * rs.eps_dim + (0,))
        red, rk, piv = la.rref(rows)
        n = rs.eps_dim
        if n in piv or rk < n:
            raise DomainError("simple-root values do not determine a Cartan element")
        return cls(tuple(red[i][n].re for i in range(n)))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def _pair_raw(weight: Sequence, h: CoweightH) -> Fraction:
    if len(weight) != len(h.coords):
        raise DomainError(
            f"weight has {len(weight)} coordinates but h has {len(h.coords)}"
        )
    return sum((Fraction(a) * b for a, b in zip(weight, h.coords)), Fraction(0))


def pair(alpha: Sequence, h: CoweightH) -> int:
    """``alpha(h)`` for a root (or integral weight) ``alpha``; must be an integer."""
    v = _pair_raw(alpha, h)
    if v.denominator != 1:
        raise DomainError(f"alpha(h) = {v} is not an integer")
    return int(v)


@dataclass(frozen=True, eq=False)
class RootSystemRealization:
    """Matrix data ``(g, V, chi)``: Cartan basis, root vectors and module weights."""

    family: str
    root_system: RootSystem
    module_tag: str
    module_dim: int
    cartan_basis: tuple
    root_vectors: dict
    module_weights: tuple
    highest_weight: tuple
    form: tuple | None = None
    _meta: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.root_system.rank

    @property
    def tag(self) -> str:
        if self.family == "gl":
            return f"gl{self.module_dim}d"
        return f"{self.family}{self.rank}{'adj' if self.module_tag == 'adjoint' else 'd'}"

    @property
    def name(self) -> str:
        n = self.module_dim
        if self.module_tag == "adjoint":
            return f"{self.family}{self.rank} adjoint"
        return {"gl": f"gl({n})", "A": f"sl({n})", "B": f"so({n})",
                "C": f"sp({n})", "D": f"so({n})"}[self.family]

    @cached_property
    def lie_basis(self) -> tuple:
        """Cartan basis followed by root vectors in the order of ``root_system.roots``."""
        return tuple(self.cartan_basis) + tuple(self.root_vectors[r] for r in self.root_system.roots)

    @property
    def dim(self) -> int:
        return len(self.cartan_basis) + len(self.root_system.roots)

    @property
    def center_dim(self) -> int:
        return 1 if self.family == "gl" else 0

    @cached_property
    def algebra(self) -> la.SubspaceBasis:
        """``g`` as a subspace of the flattened ``gl(V)``."""
        n = self.module_dim
        return la.span((la.flatten(x) for x in self.lie_basis), n * n)

    @cached_property
    def cartan_space(self) -> la.SubspaceBasis:
        n = self.module_dim
        return la.span((la.flatten(x) for x in self.cartan_basis), n * n)

    def check_h(self, h: CoweightH) -> None:
        if len(h.coords) != self.root_system.eps_dim:
            raise DomainError(
                f"h needs {self.root_system.eps_dim} coordinates for {self.name}, got {len(h.coords)}"
            )
        if self.family == "A" and sum(h.coords) != 0:
            raise DomainError(f"h = {h} is not traceless, so it is not in the Cartan of {self.name}")

    def h_matrix(self, h: CoweightH) -> tuple:
        """The diagonal matrix by which ``h`` acts on ``V``."""
        self.check_h(h)
        n = self.module_dim
        diag = [_pair_raw(w, h) for w in self.module_weights]
        return tuple(tuple(Scalar(diag[i]) if i == j else ZERO for j in range(n)) for i in range(n))

    def chi(self, h: CoweightH) -> int:
        """``chi(h)`` for the highest weight ``chi``."""
        v = _pair_raw(self.highest_weight, h)
        if v.denominator != 1:
            raise DomainError(f"chi(h) = {v} is not an integer")
        return int(v)

    def weight_multiplicities(self) -> dict:
        out: dict = {}
        for w in self.module_weights:
            out[w] = out.get(w, 0) + 1
        return out

    def simple_values(self, h: CoweightH) -> tuple:
        return tuple(_pair_raw(a, h) for a in self.root_system.simple_roots)

    def is_dominant_integral(self, h: CoweightH) -> bool:
        vals = self.simple_values(h)
        return all(v.denominator == 1 and v >= 0 for v in vals)


def _defining_weights(family: str, l: int) -> list[tuple]:
    if family in ("A", "gl"):
        n = l + 1
        return [_unit(n, i) for i in range(n)]
    lo = [_unit(l, i) for i in range(l)]
    hi = [_unit(l, l - 1 - i, -1) for i in range(l)]
    mid = [(0,) * l] if family == "B" else []
    return lo + mid + hi


def _invariant_form(family: str, n: int):
    if family in ("B", "D"):
        return tuple(tuple(ONE if i + j == n - 1 else ZERO for j in range(n)) for i in range(n))
    if family == "C":
        h = n // 2
        return tuple(
            tuple(
                (ONE if i < h else -ONE) if i + j == n - 1 else ZERO
                for j in range(n)
            )
            for i in range(n)
        )
    return None


def _algebra_conditions(family: str, n: int, form) -> list[tuple]:
    """Linear conditions on flattened X cutting out the Lie algebra inside gl(n)."""
    conds = []
    if family == "A":
        conds.append(tuple(ONE if i % (n + 1) == 0 else ZERO for i in range(n * n)))
    elif form is not None:
        # X^T J + J X = 0, entry (a, b): sum_k X[k][a] J[k][b] + J[a][k] X[k][b]
        for a in range(n):
            for b in range(n):
                row = [ZERO] * (n * n)
                for k in range(n):
                    if form[k][b]:
                        row[k * n + a] = row[k * n + a] + form[k][b]
                    if form[a][k]:
                        row[k * n + b] = row[k * n + b] + form[a][k]
                if any(row):
                    conds.append(tuple(row))
    return conds


def _defining_realization(family: str, rank: int) -> RootSystemRealization:
    rs = build_root_system(family, rank)
    l = rank - 1 if family == "gl" else rank
    weights = _defining_weights(family, l)
    n = len(weights)
    form = _invariant_form(family, n)
    conds = _algebra_conditions(family, n, form)
    g = la.nullspace(conds) if conds else la.full_space(n * n)

    def restricted(positions):
        # subspace of g supported on the given matrix positions
        cols = sorted(positions)
        sub = [tuple(row[k] for k in cols) for row in conds]
        sub = [row for row in sub if any(row)]
        local = la.nullspace(sub).basis if sub else la.identity(len(cols))
        vecs = []
        for v in local:
            full = [ZERO] * (n * n)
            for k, x in zip(cols, v):
                full[k] = x
            vecs.append(full)
        return la.span(vecs, n * n)

    diag_pos = {i * n + i for i in range(n)}
    cartan = restricted(diag_pos)
    cartan_basis = tuple(la.unflatten(v, n, n) for v in cartan.basis)
    root_vectors = {}
    for r in rs.roots:
        pos = {i * n + j for i in range(n) for j in range(n)
               if i != j and _vadd(weights[i], _vneg(weights[j])) == r}
        space = restricted(pos)
        if space.dim != 1:
            raise AssertionError(f"root space of {r} has dimension {space.dim}")
        root_vectors[r] = la.unflatten(space.basis[0], n, n)
    if g.dim != len(cartan_basis) + len(rs.roots):
        raise AssertionError("root-space decomposition does not exhaust the algebra")
    return RootSystemRealization(
        family=family,
        root_system=rs,
        module_tag="defining",
        module_dim=n,
        cartan_basis=cartan_basis,
        root_vectors=root_vectors,
        module_weights=tuple(weights),
        highest_weight=weights[0],
        form=form,
    )


def _adjoint_sl2() -> RootSystemRealization:
    rs = build_root_system("A", 1)
    alpha = rs.positive_roots[0]
    e = la.to_matrix([[0, 1], [0, 0]])
    hh = la.to_matrix([[1, 0], [0, -1]])
    f = la.to_matrix([[0, 0], [1, 0]])
    basis = [e, hh, f]

    def coords(x):
        # x = a e + b h + c f
        return (x[0][1], x[0][0], x[1][0])

    def ad(x):
        cols = [coords(la.commutator(x, b)) for b in basis]
        return la.transpose(cols)

    zero_w = (0, 0)
    return RootSystemRealization(
        family="A",
        root_system=rs,
        module_tag="adjoint",
        module_dim=3,
        cartan_basis=(ad(hh),),
        root_vectors={alpha: ad(e), _vneg(alpha): ad(f)},
        module_weights=(alpha, zero_w, _vneg(alpha)),
        highest_weight=alpha,
    )


@lru_cache(maxsize=None)
def build_realization(family: str, rank: int, module_tag: str = "defining") -> RootSystemRealization:
    """Matrix realization of a classical Lie algebra on a chosen module.

    For ``family="gl"`` the ``rank`` argument is the matrix size ``n``.
    """
    if family not in FAMILIES:
        raise ConfigurationError(f"unsupported family {family!r}")
    if module_tag in ("defining", "d"):
        return _defining_realization(family, rank)
    if module_tag in ("adjoint", "adj"):
        if family == "A" and rank == 1:
            return _adjoint_sl2()
        raise ConfigurationError(f"adjoint module is only realized for A1, not {family}{rank}")
    raise ConfigurationError(f"unknown module tag {module_tag!r}")


_TAG_RE = re.compile(r"^(gl|A|B|C|D)(\d+)(d|adj)$")


def realization_from_tag(tag: str) -> RootSystemRealization:
    m = _TAG_RE.match(tag)
    if not m:
        raise ConfigurationError(f"unrecognized realization tag {tag!r}")
    fam, rank, mod = m.groups()
    return build_realization(fam, int(rank), "adjoint" if mod == "adj" else "defining")


def dual_lattice_check(h: CoweightH, realization: RootSystemRealization) -> bool:
    """True iff ``mu(h)`` is an integer for every weight ``mu`` of the module."""
    return all(_pair_raw(w, h).denominator == 1 for w in realization.module_weights)


# -- lattices --------------------------------------------------------------

def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integer_row_basis(vectors: Sequence[Sequence]) -> list[tuple]:
    """Echelon basis of the Z-span of rational vectors (Hermite-style row reduction)."""
    vecs = [tuple(Fraction(x) for x in v) for v in vectors]
    if not vecs:
        return []
    den = 1
    for v in vecs:
        for x in v:
            den = _lcm(den, x.denominator)
    rows = [[int(x * den) for x in v] for v in vecs]
    ncols = len(rows[0])
    basis = []
    r = 0
    for c in range(ncols):
        live = [row for row in rows[r:] if row[c]]
        if not live:
            continue
        # gcd-reduce the column
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c]]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda i: abs(rows[i][c]))
            for i in nz:
                if i != p:
                    q = rows[i][c] // rows[p][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[p])]
        p = next(i for i in range(r, len(rows)) if rows[i][c])
        rows[r], rows[p] = rows[p], rows[r]
        if rows[r][c] < 0:
            rows[r] = [-a for a in rows[r]]
        r += 1
    for row in rows[:r]:
        basis.append(tuple(Fraction(a, den) for a in row))
    return basis


def _solve_integral(basis: Sequence[tuple], v: Sequence) -> tuple | None:
    """Coordinates of ``v`` in ``basis`` if they exist (any field values)."""
    cols = la.transpose([tuple(Scalar(x) for x in b) for b in basis])
    aug = [tuple(c) + (Scalar(x),) for c, x in zip(cols, v)]
    red, rk, piv = la.rref(aug)
    k = len(basis)
    if k in piv:
        return None
    return tuple(red[i][k].re for i in range(k))


@dataclass(frozen=True)
class WeightLattices:
    """Lattices in the dual of the Cartan, in coordinates of the realization's Cartan basis.

    A weight ``mu`` is stored as ``(mu(h_1), ..., mu(h_r))``; a Cartan element
    ``h = sum c_i h_i`` by its coefficient vector ``c``.
    """

    weight_basis: tuple    # basis of L_V
    weight_dual: tuple     # basis of L_V^*
    root_basis: tuple      # basis of Q
    root_dual: tuple | None  # basis of Q^*, when Q has full rank

    def root_lattice_in_weight_lattice(self) -> bool:
        for r in self.root_basis:
            c = _solve_integral(self.weight_basis, r)
            if c is None or any(x.denominator != 1 for x in c):
                return False
        return True

    def dual_in_root_dual(self) -> bool:
        # L_V^* subset of Q^*  <=>  alpha(h) in Z for h in L_V^*, alpha in Q
        for h in self.weight_dual:
            for r in self.root_basis:
                if sum(a * b for a, b in zip(h, r)).denominator != 1:
                    return False
        return True


def _weight_on_cartan(realization: RootSystemRealization, weight) -> tuple:
    # diagonal Cartan basis: mu(h_i) is the diagonal entry at a basis vector of weight mu
    idx = realization.module_weights.index(tuple(weight)) if tuple(weight) in realization.module_weights else None
    if idx is not None:
        return tuple(h[idx][idx].re for h in realization.cartan_basis)
    x = realization.root_vectors[tuple(weight)]
    out = []
    for h in realization.cartan_basis:
        br = la.commutator(h, x)
        i, j = next((i, j) for i in range(len(x)) for j in range(len(x)) if x[i][j])
        out.append((br[i][j] / x[i][j]).re)
    return tuple(out)


def weight_lattices(realization: RootSystemRealization) -> WeightLattices:
    weights = [_weight_on_cartan(realization, w) for w in set(realization.module_weights)]
    lv = integer_row_basis(weights)
    roots = [_weight_on_cartan(realization, a) for a in realization.root_system.simple_roots]
    q = integer_row_basis(roots)
    r = len(realization.cartan_basis)

    def dual(basis):
        if len(basis) != r:
            return None
        inv = la.inverse([tuple(Scalar(x) for x in b) for b in basis])
        return tuple(tuple(inv[i][j].re for i in range(r)) for j in range(r))

    return WeightLattices(tuple(lv), dual(lv), tuple(q), dual(q))
