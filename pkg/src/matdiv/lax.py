"""Genus-0 spaces of Lax operators, M-operators and sections.

The surface is the Riemann sphere with global coordinate ``w``; every marked
point is finite and ``infinity`` is an ordinary point, so admissible functions
are regular there.  A global function is stored in partial-fraction form
``P(w) + sum_p sum_j C_{p,j} (w - p)^-j`` and all local questions are answered by
exact Laurent expansion.  Each space is the nullspace of its jet conditions
inside an explicit ambient space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

from .errors import ConfigurationError, DimensionError
from .exactnum import linalg as la
from .exactnum.scalar import ONE, ZERO, Scalar, as_scalar
from .exactnum.series import TruncatedMatrixSeries
from .grading import LieFiltration, compute_grading, compute_module_grading
from .liecore import CoweightH, RootSystemRealization, pair

__all__ = [
    "SurfaceConfig",
    "GlobalMatrixFunction",
    "OperatorSpace",
    "ambient_basis",
    "build_L_space",
    "build_M_space",
    "build_section_space",
    "localize",
    "bracket_global",
    "quotient_report",
    "lax_violations",
    "section_dimension_oracle",
    "lax_dimension_oracle",
]


@dataclass(frozen=True, eq=False)
class SurfaceConfig:
    """Marked points on the sphere: ``gammas`` carry Cartan elements, ``pis`` carry
    the multiplicities of the divisor ``D``."""

    realization: RootSystemRealization
    gammas: tuple = ()      # ((point, CoweightH), ...)
    pis: tuple = ()         # ((point, mult), ...)
    genus: int = 0

    def __post_init__(self):
        if self.genus != 0:
            raise ConfigurationError("only genus 0 is supported")
        gam = tuple((as_scalar(p), h) for p, h in self.gammas)
        pis = tuple((as_scalar(p), int(m)) for p, m in self.pis)
        object.__setattr__(self, "gammas", gam)
        object.__setattr__(self, "pis", pis)
        pts = [p for p, _ in gam] + [p for p, _ in pis]
        if len(set(pts)) != len(pts):
            raise ConfigurationError("marked points must be pairwise distinct and Gamma, Pi disjoint")
        for _, m in pis:
            if m < 0:
                raise ConfigurationError("D must be nonnegative")
        for _, h in gam:
            self.realization.check_h(h)

    @property
    def deg_D(self) -> int:
        return sum(m for _, m in self.pis)

    @property
    def gamma_points(self) -> tuple:
        return tuple(p for p, _ in self.gammas)

    def h_at(self, point) -> CoweightH:
        point = as_scalar(point)
        for p, h in self.gammas:
            if p == point:
                return h
        raise KeyError(point)


# -- scalar partial fractions


def _local_scalar(pole, j: int, at: Scalar, t: int) -> Scalar:
    """Coefficient of ``z^t`` in ``(w - pole)^-j`` at ``w = at + z``; ``pole=None``
    means the constant function ``1`` (``j`` ignored)."""
    if pole is None:
        return ONE if t == 0 else ZERO
    if pole == at:
        return ONE if t == -j else ZERO
    if t < 0:
        return ZERO
    # (z + c)^-j = sum_t binom(-j, t) c^(-j-t) z^t with c = at - pole
    c = at - pole
    sign = -1 if t % 2 else 1
    return (c ** (-j - t)) * (sign * comb(j + t - 1, t))


@dataclass(frozen=True, eq=False)
class GlobalMatrixFunction:
    """``sum_i poly[i] w^i + sum_p sum_j principal[p][j-1] (w - p)^-j`` with matrix coefficients."""

    shape: tuple
    poly: tuple = ()
    principal: Mapping = field(default_factory=dict)

    @classmethod
    def build(cls, shape, poly=(), principal=None) -> "GlobalMatrixFunction":
        r, c = shape
        z = la.zeros(r, c)
        poly = [la.to_matrix(m) for m in poly]
        while poly and poly[-1] == z:
            poly.pop()
        prin = {}
        for p, cs in (principal or {}).items():
            cs = [la.to_matrix(m) for m in cs]
            while cs and cs[-1] == z:
                cs.pop()
            if cs:
                prin[as_scalar(p)] = tuple(cs)
        return cls((r, c), tuple(poly), prin)

    @classmethod
    def constant(cls, m) -> "GlobalMatrixFunction":
        m = la.to_matrix(m)
        return cls.build((len(m), len(m[0])), (m,))

    @classmethod
    def pole(cls, m, point, order: int) -> "GlobalMatrixFunction":
        """``m (w - point)^-order``."""
        m = la.to_matrix(m)
        z = la.zeros(len(m), len(m[0]))
        return cls.build((len(m), len(m[0])), (), {point: [z] * (order - 1) + [m]})

    def pole_order(self, point) -> int:
        return len(self.principal.get(as_scalar(point), ()))

    def is_zero(self) -> bool:
        return not self.poly and not self.principal

    def __add__(self, other: "GlobalMatrixFunction") -> "GlobalMatrixFunction":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        z = la.zeros(*self.shape)
        n = max(len(self.poly), len(other.poly))
        poly = [la.matadd(self.poly[i] if i < len(self.poly) else z,
                          other.poly[i] if i < len(other.poly) else z) for i in range(n)]
        prin = {}
        for p in set(self.principal) | set(other.principal):
            a, b = self.principal.get(p, ()), other.principal.get(p, ())
            prin[p] = [la.matadd(a[i] if i < len(a) else z, b[i] if i < len(b) else z)
                       for i in range(max(len(a), len(b)))]
        return GlobalMatrixFunction.build(self.shape, poly, prin)

    def scale(self, c) -> "GlobalMatrixFunction":
        c = as_scalar(c)
        return GlobalMatrixFunction.build(
            self.shape, [la.matscale(c, m) for m in self.poly],
            {p: [la.matscale(c, m) for m in cs] for p, cs in self.principal.items()},
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def local_coefficients(self, at, lo: int, hi: int) -> dict:
        """Exact Laurent coefficients at ``w = at + z`` for degrees ``lo..hi``."""
        at = as_scalar(at)
        r, c = self.shape
        out = {}
        for t in range(lo, hi + 1):
            acc = la.zeros(r, c)
            if t >= 0:
                # P(at + z): coefficient of z^t is sum_i P_i binom(i, t) at^(i-t)
                for i in range(t, len(self.poly)):
                    f = at ** (i - t) * comb(i, t)
                    if f:
                        acc = la.matadd(acc, la.matscale(f, self.poly[i]))
            for p, cs in self.principal.items():
                for j, m in enumerate(cs, start=1):
                    f = _local_scalar(p, j, at, t)
                    if f:
                        acc = la.matadd(acc, la.matscale(f, m))
            out[t] = acc
        return out

    def __matmul__(self, other: "GlobalMatrixFunction") -> "GlobalMatrixFunction":
        if self.shape[1] != other.shape[0]:
            raise DimensionError("shape mismatch in product")
        shape = (self.shape[0], other.shape[1])
        z = la.zeros(*shape)
        # principal parts from local products
        prin = {}
        for p in set(self.principal) | set(other.principal):
            a, b = self.pole_order(p), other.pole_order(p)
            fa = self.local_coefficients(p, -a, b - 1)
            gb = other.local_coefficients(p, -b, a - 1)
            cs = []
            for j in range(1, a + b + 1):
                t = -j
                acc = z
                for s in range(-a, t + b + 1):
                    acc = la.matadd(acc, la.matmul(fa[s], gb[t - s]))
                cs.append(acc)
            prin[p] = cs
        # polynomial part: P_f P_g + poly(P_f R_g) + poly(R_f P_g)
        deg = len(self.poly) + len(other.poly)
        poly = [z] * max(0, deg)
        for i, a in enumerate(self.poly):
            for j, b in enumerate(other.poly):
                poly[i + j] = la.matadd(poly[i + j], la.matmul(a, b))
        for q, cs in other.principal.items():
            for k, term in _polypart(self.poly, q, cs, left=True):
                poly[k] = la.matadd(poly[k], term)
        for q, cs in self.principal.items():
            for k, term in _polypart(other.poly, q, cs, left=False):
                poly[k] = la.matadd(poly[k], term)
        return GlobalMatrixFunction.build(shape, poly, prin)

    def localize(self, at, lo: int, hi: int) -> TruncatedMatrixSeries:
        return localize(self, at, lo, hi)


def _polypart(poly, q, cs, left: bool):
    """Polynomial part of ``P(w) C_j (w-q)^-j`` (or ``C_j P(w)`` if not ``left``),
    as ``(power, matrix)`` pairs."""
    if not poly:
        return
    q = as_scalar(q)
    # Taylor shift: P(w) = sum_i a_i (w - q)^i
    shifted = []
    for i in range(len(poly)):
        acc = None
        for l in range(i, len(poly)):
            f = q ** (l - i) * comb(l, i)
            term = la.matscale(f, poly[l])
            acc = term if acc is None else la.matadd(acc, term)
        shifted.append(acc)
    for j, cj in enumerate(cs, start=1):
        for i in range(j, len(shifted)):
            m = la.matmul(shifted[i], cj) if left else la.matmul(cj, shifted[i])
            e = i - j
            # (w - q)^e = sum_r binom(e, r) w^r (-q)^(e-r)
            for r in range(e + 1):
                f = (-q) ** (e - r) * comb(e, r)
                yield r, la.matscale(f, m)


def localize(f: GlobalMatrixFunction, at, lo: int, hi: int) -> TruncatedMatrixSeries:
    """Laurent jet of ``f`` at ``at`` on degrees ``lo..hi`` (known below ``hi + 1``)."""
    coeffs = f.local_coefficients(at, lo, hi)
    return TruncatedMatrixSeries.build([coeffs[t] for t in range(lo, hi + 1)], lo, hi + 1, f.shape)


def bracket_global(f: GlobalMatrixFunction, g: GlobalMatrixFunction) -> GlobalMatrixFunction:
    return (f @ g) - (g @ f)


# -- ambient spaces and constraint solving


def _scalar_basis(orders: Mapping) -> list:
    out = [(None, 0)]
    for p, k in orders.items():
        out.extend((p, j) for j in range(1, k + 1))
    return out


def ambient_basis(config: SurfaceConfig, max_pole_orders: Mapping, values: Sequence | None = None) -> list:
    """Basis ``{X, X (w-p)^-j}`` of functions with poles bounded by ``max_pole_orders``.

    ``values`` defaults to the basis of ``g``; pass module basis vectors for
    section spaces.
    """
    if values is None:
        values = config.realization.lie_basis
    out = []
    for p, j in _scalar_basis({as_scalar(p): k for p, k in max_pole_orders.items()}):
        for x in values:
            out.append(GlobalMatrixFunction.constant(x) if p is None else GlobalMatrixFunction.pole(x, p, j))
    return out


@dataclass(frozen=True, eq=False)
class OperatorSpace:
    """Solutions of the jet conditions inside an ambient space.

    ``coords`` is the subspace of coordinate vectors relative to
    ``ambient`` (scalar-function major, value-basis minor).
    """

    config: SurfaceConfig
    kind: str
    orders: dict
    values: tuple
    coords: la.SubspaceBasis
    constraint_rank: int

    @property
    def dim(self) -> int:
        return self.coords.dim

    @property
    def ambient_dim(self) -> int:
        return self.coords.ambient_dim

    def element(self, vec) -> GlobalMatrixFunction:
        scal = _scalar_basis(self.orders)
        nv = len(self.values)
        shape = (len(self.values[0]), len(self.values[0][0]))
        z = la.zeros(*shape)
        poly = [z]
        prin: dict = {}
        for si, (p, j) in enumerate(scal):
            acc = z
            for b, x in enumerate(self.values):
                c = vec[si * nv + b]
                if c:
                    acc = la.matadd(acc, la.matscale(c, x))
            if p is None:
                poly[0] = acc
            else:
                cs = prin.setdefault(p, [z] * self.orders[p])
                cs[j - 1] = acc
        return GlobalMatrixFunction.build(shape, poly, prin)

    @property
    def basis(self) -> list:
        return [self.element(v) for v in self.coords.basis]


def _jet_rows(scal, nv: int, at: Scalar, t: int, functionals) -> list:
    lam = [_local_scalar(p, j, at, t) for p, j in scal]
    rows = []
    for a in functionals:
        row = [ZERO] * (len(scal) * nv)
        for si, l in enumerate(lam):
            if l:
                for b, ab in enumerate(a):
                    if ab:
                        row[si * nv + b] = l * ab
        rows.append(tuple(row))
    return rows


def _solve(config, kind, orders, values, conditions) -> OperatorSpace:
    """``conditions``: list of ``(point, degree, allowed SubspaceBasis in value coordinates)``."""
    scal = _scalar_basis(orders)
    nv = len(values)
    rows = []
    for at, t, allowed in conditions:
        if allowed.is_full():
            continue
        rows.extend(_jet_rows(scal, nv, at, t, allowed.annihilator()))
    ncols = len(scal) * nv
    sol = la.nullspace_cols(rows, ncols)
    return OperatorSpace(config, kind, dict(orders), tuple(values), sol, ncols - sol.dim)


def _lie_degrees(realization: RootSystemRealization, h: CoweightH) -> list:
    """ad-h eigenvalue of each element of ``lie_basis`` (Cartan first, then roots)."""
    degs = [0] * len(realization.cartan_basis)
    degs += [pair(r, h) for r in realization.root_system.roots]
    return degs


def _cartan_coords(realization: RootSystemRealization, h: CoweightH) -> tuple:
    """Coordinates of ``h`` (as a matrix) in ``lie_basis``."""
    hv = la.flatten(realization.h_matrix(h))
    cart = [la.flatten(x) for x in realization.cartan_basis]
    aug = [tuple(c[i] for c in cart) + (hv[i],) for i in range(len(hv))]
    red, rk, piv = la.rref(aug)
    nc = len(cart)
    if nc in piv:
        raise AssertionError("h is not in the Cartan span")
    sol = [ZERO] * nc
    for r, pc in enumerate(piv):
        sol[pc] = red[r][nc]
    return tuple(sol) + (ZERO,) * len(realization.root_system.roots)


def _depths(config: SurfaceConfig) -> dict:
    return {p: compute_grading(config.realization, h).depth for p, h in config.gammas}


def _operator_orders(config: SurfaceConfig) -> dict:
    orders = dict(_depths(config))
    for p, m in config.pis:
        orders[p] = m
    return orders


def _operator_space(config: SurfaceConfig, kind: str) -> OperatorSpace:
    real = config.realization
    nv = real.dim
    orders = _operator_orders(config)
    conditions = []
    for p, h in config.gammas:
        k = orders[p]
        degs = _lie_degrees(real, h)
        hc = _cartan_coords(real, h) if kind == "M" and not h.is_zero() else None
        for t in range(-k, k):
            if kind == "M" and t >= 0:
                break
            # g~_t is spanned by the basis elements of degree <= t
            vecs = [tuple(ONE if b == i else ZERO for b in range(nv)) for i, d in enumerate(degs) if d <= t]
            if kind == "M" and t == -1 and hc is not None:
                vecs.append(hc)
            conditions.append((p, t, la.span(vecs, nv)))
    return _solve(config, kind, orders, real.lie_basis, conditions)


def build_L_space(config: SurfaceConfig) -> OperatorSpace:
    """``L^D``: jets with ``L_p in g~_p`` at every ``gamma``, poles at ``Pi`` bounded by ``D``."""
    return _operator_space(config, "L")


def build_M_space(config: SurfaceConfig) -> OperatorSpace:
    """``M^D``: ``M_p in g~_p`` for ``p < 0`` with an extra ``nu h_gamma / z``."""
    return _operator_space(config, "M")


def _module_values(n: int) -> tuple:
    return tuple(tuple((ONE if i == j else ZERO,) for i in range(n)) for j in range(n))


def build_section_space(config: SurfaceConfig) -> OperatorSpace:
    """Sections ``f`` with ``(f) + D + m Gamma >= 0`` and ``f_i in F_i`` at every ``gamma``,
    ``F`` the flag of the reduced form ``z^{h_gamma}``."""
    real = config.realization
    n = real.module_dim
    orders = {}
    conditions = []
    for p, h in config.gammas:
        flag = compute_module_grading(real, h).flag
        k = max(0, -flag.lo)
        orders[p] = k
        for t in range(-k, flag.hi + 1):
            conditions.append((p, t, flag.at(t)))
    for p, m in config.pis:
        orders[p] = m
    return _solve(config, "section", orders, _module_values(n), conditions)


# -- independent counts and checks


def section_dimension_oracle(config: SurfaceConfig) -> int:
    """Componentwise Riemann-Roch on the sphere: the ``j``-th coordinate may have a
    pole of order ``mu_j(h_gamma)`` (or must vanish to order ``-mu_j``) at each ``gamma``."""
    real = config.realization
    total = 0
    for w in real.module_weights:
        shift = sum(pair(w, h) for _, h in config.gammas)
        total += max(0, config.deg_D + 1 + shift)
    return total


def lax_dimension_oracle(config: SurfaceConfig, kind: str) -> int:
    """Root-by-root count of ``L^D`` or ``M^D`` on the sphere."""
    real = config.realization
    dD = config.deg_D
    total = 0
    for r in real.root_system.roots:
        if kind == "L":
            need = sum(pair(r, h) for _, h in config.gammas)
        else:
            need = sum(min(pair(r, h), 0) for _, h in config.gammas)
        total += max(0, dD + 1 - need)
    total += len(real.cartan_basis) * (dD + 1)
    if kind == "M":
        total += sum(1 for _, h in config.gammas if not h.is_zero())
    return total


def lax_violations(f: GlobalMatrixFunction, config: SurfaceConfig) -> list:
    """``(gamma, p)`` pairs where the jet of ``f`` leaves ``g~_p``, checked by
    subspace membership in ``gl(V)``."""
    bad = []
    for p, h in config.gammas:
        filt: LieFiltration = compute_grading(config.realization, h).filtration()
        lo = -f.pole_order(p)
        jets = f.local_coefficients(p, lo, filt.hi)
        for t in range(lo, filt.hi + 1):
            if not filt.at(t).contains_vector(la.flatten(jets[t])):
                bad.append((p, t))
    return bad


def _jet_rank(space: OperatorSpace, window: Mapping) -> int:
    rows = []
    scal = _scalar_basis(space.orders)
    nv = len(space.values)
    for vec in space.coords.basis:
        row = []
        for at, (lo, hi) in window.items():
            for t in range(lo, hi + 1):
                lam = [_local_scalar(p, j, at, t) for p, j in scal]
                for b in range(nv):
                    acc = ZERO
                    for si, l in enumerate(lam):
                        if l:
                            c = vec[si * nv + b]
                            if c:
                                acc = acc + l * c
                    row.append(acc)
        rows.append(tuple(row))
    return la.rank(rows) if rows and rows[0] else 0


def quotient_report(config: SurfaceConfig) -> dict:
    """Dimensions of ``L^D``, ``M^D`` and ``M^D / L^D`` against the tangent count."""
    real = config.realization
    L = build_L_space(config)
    M = build_M_space(config)
    tangent = sum(pair(a, h) for _, h in config.gammas for a in real.root_system.positive_roots)
    window = {p: (-M.orders[p], 0) for p in config.gamma_points}
    kernel = M.dim - _jet_rank(M, window) if config.gammas else M.dim
    applicable = config.deg_D < len(config.gammas)
    dim_q = M.dim - L.dim
    return {
        "dim_L": L.dim,
        "dim_M": M.dim,
        "dim_quotient": dim_q,
        "tangent_formula": tangent,
        "localization_kernel_dim": kernel,
        "injectivity_applicable": applicable,
        "injective": (kernel == 0) if applicable else None,
        "L_in_M": la.subspace_contains(M.coords, L.coords),
        "quotient_at_least_tangent": dim_q >= tangent,
        "excess": dim_q - tangent,
        "gamma_count": len(config.gammas),
        "deg_D": config.deg_D,
    }
