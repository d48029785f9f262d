"""Matrix-divisor germs at a single point.

A germ is an invertible matrix Laurent series ``Psi`` in a local coordinate
``z``.  Its sections are the vector series ``f`` with ``Psi f`` holomorphic;
the Laurent coefficients of sections fill out the flag ``F_i`` extracted from
the finite linear system ``sum_{a+b=t} Psi_a f_b = 0`` (``t < 0``).
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import (
    DimensionError,
    DomainError,
    IndeterminateError,
    InsufficientPrecisionError,
    UnsupportedFamilyError,
)
from .exactnum import linalg as la
from .exactnum.scalar import ZERO, Scalar, as_scalar
from .exactnum.series import (
    DEFAULT_EXACT_TERMS,
    TruncatedMatrixSeries,
    series_invert,
    series_smith,
)
from .flag import Flag
from .grading import LieFiltration, compute_module_grading
from .liecore import CoweightH, RootSystemRealization, _pair_raw

__all__ = [
    "DivisorGerm",
    "ReducedForm",
    "Flag",
    "smith_reduce",
    "reduced_form_left",
    "multiply_back_residual",
    "flag_from_system",
    "flag_from_h",
    "germ_from_h",
    "is_section",
    "satisfies_flag",
    "vector_series",
    "endomorphism_filtration",
    "flags_equal_up_to_shift",
    "random_unit_series",
    "random_germ",
]

SMITH_FAMILIES = ("gl", "A")


@dataclass(frozen=True, eq=False)
class DivisorGerm:
    """``Psi = sum_i Psi_i z^i`` at ``point``, acting on the module of ``realization``."""

    realization: RootSystemRealization
    psi: TruncatedMatrixSeries
    point: Scalar = field(default=ZERO)

    def __post_init__(self):
        n = self.realization.module_dim
        if self.psi.shape != (n, n):
            raise DimensionError(f"germ must be {n}x{n} for {self.realization.name}, got {self.psi.shape}")
        if self.psi.is_zero():
            raise InsufficientPrecisionError("germ is zero within its precision", needed=1)

    @property
    def n(self) -> int:
        return self.psi.rows

    @property
    def pole_order(self) -> int:
        return max(0, -self.psi.valuation)

    @property
    def precision(self) -> int | None:
        return self.psi.precision


@dataclass(frozen=True, eq=False)
class ReducedForm:
    """``U Psi V = diag(z^d)`` with ``d`` descending; ``k = V^-1`` so ``U Psi = z^d k``."""

    d: tuple
    left: TruncatedMatrixSeries
    right: TruncatedMatrixSeries
    residual: TruncatedMatrixSeries

    def diagonal(self) -> TruncatedMatrixSeries:
        return TruncatedMatrixSeries.diagonal_monomials(self.d)


def _permute_rows(m: TruncatedMatrixSeries, perm: Sequence[int]) -> TruncatedMatrixSeries:
    coeffs = [tuple(c[p] for p in perm) for c in m.coeffs]
    return TruncatedMatrixSeries.build(coeffs, m.low, m.order, m.shape)


def _permute_cols(m: TruncatedMatrixSeries, perm: Sequence[int]) -> TruncatedMatrixSeries:
    coeffs = [tuple(tuple(row[p] for p in perm) for row in c) for c in m.coeffs]
    return TruncatedMatrixSeries.build(coeffs, m.low, m.order, m.shape)


def smith_reduce(germ: DivisorGerm, guard: int = 4,
                 terms: int = DEFAULT_EXACT_TERMS) -> ReducedForm:
    """Cartan decomposition of a type-A germ by Smith reduction over the Taylor ring."""
    if germ.realization.family not in SMITH_FAMILIES:
        raise UnsupportedFamilyError(
            f"unsupported family for reduction: {germ.realization.name} "
            "(Smith reduction is implemented for gl/sl only)"
        )
    u, exps, v = series_smith(germ.psi, max(terms, guard + 1))
    spread = max(exps) - min(exps)
    prec = germ.precision
    if prec is not None and prec < spread + guard:
        need = spread + guard - prec
        raise InsufficientPrecisionError(
            f"insufficient precision: {prec} terms known, {spread + guard} required "
            f"(exponent spread {spread} plus guard {guard}); supply {need} more terms",
            needed=need,
        )
    n = germ.n
    perm = sorted(range(n), key=lambda i: -exps[i])
    d = tuple(exps[i] for i in perm)
    left = _permute_rows(u, perm)
    right = _permute_cols(v, perm)
    residual = series_invert(right, terms)
    return ReducedForm(d, left, right, residual)


def reduced_form_left(germ: DivisorGerm, guard: int = 4) -> tuple[tuple, TruncatedMatrixSeries]:
    """``(d, k)`` with ``z^d k`` left-equivalent to ``Psi`` and ``k`` a unit series."""
    rf = smith_reduce(germ, guard)
    return rf.d, rf.residual


def multiply_back_residual(germ: DivisorGerm, rf: ReducedForm) -> TruncatedMatrixSeries:
    """``U Psi V - diag(z^d)``; zero on its window when the reduction is correct."""
    return rf.left @ germ.psi @ rf.right - rf.diagonal()


def germ_from_h(realization: RootSystemRealization, h: CoweightH, point=ZERO) -> DivisorGerm:
    """The exact germ ``z^h`` (diagonal ``z^{mu_j(h)}``)."""
    exps = []
    for w in realization.module_weights:
        v = _pair_raw(w, h)
        if v.denominator != 1:
            raise DomainError(f"h = {h} is not in the dual of the weight lattice of {realization.name}")
        exps.append(int(v))
    return DivisorGerm(realization, TruncatedMatrixSeries.diagonal_monomials(exps), as_scalar(point))


def flag_from_h(realization: RootSystemRealization, h: CoweightH) -> Flag:
    """``F_j = sum_{s <= j} V_s`` with ``V_s = {v : h v = -s v}``."""
    return compute_module_grading(realization, h).flag


def _system(germ: DivisorGerm, terms: int):
    """Unknown range ``[-k, m-1]`` and the stacked coefficient matrix of the system."""
    n = germ.n
    m = germ.pole_order
    inv = series_invert(germ.psi, terms)
    k = -inv.valuation
    lo, hi = -k, m - 1
    if hi < lo:
        return lo, hi, ()
    need_order = k  # Psi_a is used for a <= k - 1
    if germ.psi.order is not None and germ.psi.order < need_order:
        raise InsufficientPrecisionError(
            f"the system needs Psi up to z^{need_order - 1}, known only below z^{germ.psi.order}",
            needed=need_order - germ.psi.order,
        )
    nb = hi - lo + 1
    rows = []
    for t in range(-m - k, 0):
        block_row = [[ZERO] * (n * nb) for _ in range(n)]
        for bi, b in enumerate(range(lo, hi + 1)):
            coeff = germ.psi.coefficient(t - b)
            for r in range(n):
                for c in range(n):
                    if coeff[r][c]:
                        block_row[r][bi * n + c] = coeff[r][c]
        rows.extend(tuple(r) for r in block_row)
    return lo, hi, tuple(rows)


def flag_from_system(germ: DivisorGerm, terms: int = DEFAULT_EXACT_TERMS) -> Flag:
    """Flag of the germ: ``F_i`` is the projection of the solution space of the
    system onto the unknown ``f_i``."""
    n = germ.n
    lo, hi, rows = _system(germ, terms)
    if hi < lo:
        return Flag(n, lo, ())
    nb = hi - lo + 1
    sol = la.nullspace_cols(rows, n * nb)
    spaces = []
    for bi in range(nb):
        spaces.append(la.span((v[bi * n:(bi + 1) * n] for v in sol.basis), n))
    return Flag(n, lo, tuple(spaces))


def vector_series(coeffs: Mapping[int, Sequence], n: int, order: int | None = None) -> TruncatedMatrixSeries:
    """Column-vector series from ``{degree: vector}``."""
    if not coeffs:
        return TruncatedMatrixSeries.build([], 0 if order is None else order, order, shape=(n, 1))
    lo, hi = min(coeffs), max(coeffs)
    mats = []
    for d in range(lo, hi + 1):
        v = coeffs.get(d, (0,) * n)
        if len(v) != n:
            raise DimensionError(f"vector of length {len(v)} for a rank-{n} germ")
        mats.append(tuple((as_scalar(x),) for x in v))
    return TruncatedMatrixSeries.build(mats, lo, order, shape=(n, 1))


def is_section(f: TruncatedMatrixSeries, germ: DivisorGerm) -> bool:
    """True iff ``Psi f`` is holomorphic at the point."""
    if f.shape != (germ.n, 1):
        raise DimensionError("f must be an n x 1 vector series")
    prod = germ.psi @ f
    if prod.coeffs and prod.low < 0:
        return False
    if prod.order is not None and prod.order < 0:
        raise IndeterminateError(
            f"Psi f is known only below z^{prod.order}; the polar part cannot be decided",
            needed=-prod.order,
        )
    return True


def satisfies_flag(f: TruncatedMatrixSeries, flag: Flag) -> bool:
    """Coefficientwise criterion ``f_i in F_i`` for every ``i``."""
    if f.is_zero():
        return True
    hi = flag.hi
    if f.order is not None and f.order <= hi:
        raise IndeterminateError(
            f"f is known only below z^{f.order}; the flag constrains degrees up to {hi}",
            needed=hi - f.order + 1,
        )
    for i in range(f.low, hi + 1):
        v = tuple(row[0] for row in f.coefficient(i))
        if not flag.at(i).contains_vector(v):
            return False
    return True


def endomorphism_filtration(flag: Flag, realization: RootSystemRealization) -> LieFiltration:
    """``g~_i = {X in g : X F_j in F_{j+i} for all j}``."""
    n = realization.module_dim
    if flag.ambient_dim != n:
        raise DimensionError("flag and realization act on modules of different dimension")
    _, lo, subs = flag.canonical()
    hi = lo + len(subs) - 1
    basis = realization.lie_basis
    i_lo, i_hi = lo - hi - 1, hi - lo + 1
    pieces = []
    for i in range(i_lo, i_hi + 1):
        conds = []
        for j in range(lo, hi + 2):
            target = flag.at(j + i)
            if target.is_full():
                continue
            ann = target.annihilator()
            for v in flag.at(j).basis:
                images = [la.matvec(x, v) for x in basis]
                for a in ann:
                    conds.append(tuple(
                        sum((ai * wi for ai, wi in zip(a, w) if ai and wi), ZERO) for w in images
                    ))
        sol = la.nullspace_cols(conds, len(basis))
        mats = []
        for c in sol.basis:
            acc = [ZERO] * (n * n)
            for ck, x in zip(c, basis):
                if ck:
                    for idx, e in enumerate(la.flatten(x)):
                        if e:
                            acc[idx] = acc[idx] + ck * e
            mats.append(acc)
        pieces.append(la.span(mats, n * n))
    return LieFiltration(realization, i_lo, tuple(pieces))


def _check_invertible(g) -> tuple:
    g = la.to_matrix(g)
    try:
        la.inverse(g)
    except (ZeroDivisionError, IndexError):
        raise DomainError("the shift g must be an invertible constant matrix") from None
    return g


def flags_equal_up_to_shift(config_a: Mapping, config_b: Mapping, g, variant: str = "fixed") -> bool:
    """Is ``g F^a = F^b`` with one constant ``g``?

    ``variant="fixed"`` compares flags point by point over the same support;
    ``variant="set"`` ignores the labels and compares multisets of flags.
    """
    g = _check_invertible(g)
    if variant == "fixed":
        if set(config_a) != set(config_b):
            return False
        return all(config_a[p].image(g) == config_b[p] for p in config_a)
    if variant == "set":
        return Counter(f.image(g) for f in config_a.values()) == Counter(config_b.values())
    raise ValueError("variant must be 'fixed' or 'set'")


# -- random instances for property checks


def _rand_scalar(rng: random.Random, bound: int = 3) -> Scalar:
    return Scalar(rng.randint(-bound, bound))


def random_unit_series(n: int, rng: random.Random, terms: int, bound: int = 3) -> TruncatedMatrixSeries:
    """Random element of ``GL_n`` over the Taylor ring: invertible constant term,
    exact polynomial of degree ``< terms``."""
    while True:
        c0 = tuple(tuple(_rand_scalar(rng, bound) for _ in range(n)) for _ in range(n))
        if la.rank(c0) == n:
            break
    mats = [c0] + [tuple(tuple(_rand_scalar(rng, bound) for _ in range(n)) for _ in range(n))
                   for _ in range(terms - 1)]
    return TruncatedMatrixSeries.build(mats, 0, None, (n, n))


def random_germ(realization: RootSystemRealization, rng: random.Random, max_pole: int = 2,
                max_zero: int = 2, precision: int = 8) -> DivisorGerm:
    """``k1 z^e k2`` truncated to ``precision`` terms, ``e_j in [-max_pole, max_zero]``.

    For non-type-A families the exponents come from module weights paired with a
    random Cartan element so that the germ stays in the group.
    """
    n = realization.module_dim
    if realization.family in SMITH_FAMILIES:
        exps = [rng.randint(-max_pole, max_zero) for _ in range(n)]
    else:
        h = CoweightH([rng.randint(-1, 1) for _ in range(realization.root_system.eps_dim)])
        exps = [int(_pair_raw(w, h)) for w in realization.module_weights]
    k1 = random_unit_series(n, rng, 3)
    k2 = random_unit_series(n, rng, 3)
    psi = k1 @ TruncatedMatrixSeries.diagonal_monomials(exps) @ k2
    low = psi.valuation
    return DivisorGerm(realization, psi.truncate(low + precision))
