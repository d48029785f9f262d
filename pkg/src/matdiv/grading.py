"""Z-gradings of g and of the module V induced by a Cartan element h.

``g_p = {X : [h, X] = p X}`` and ``V_i = {v : h v = -i v}``; the flag
``F_j = V_lo + ... + V_j`` is the one attached to the divisor germ ``z^h``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import DomainError
from .exactnum import linalg as la
from .exactnum.scalar import ZERO
from .flag import Flag
from .liecore import CoweightH, RootSystemRealization, _pair_raw, dual_lattice_check, pair

__all__ = [
    "LieGrading",
    "LieFiltration",
    "ModuleGrading",
    "compute_grading",
    "compute_module_grading",
    "tangent_basis",
    "moduli_dimension",
    "moduli_breakdown",
    "bracket_violations",
    "MODES",
]

MODES = ("fixed_gamma", "moving_gamma", "moving_gamma_mod_adG")


@dataclass(frozen=True, eq=False)
class LieFiltration:
    """Increasing filtration of ``g`` stored on ``[lo, hi]``.

    Below ``lo`` the pieces are zero, above ``hi`` they are all of ``g``.
    """

    realization: RootSystemRealization
    lo: int
    tilde_pieces: tuple
    grading: "LieGrading | None" = None

    @property
    def hi(self) -> int:
        return self.lo + len(self.tilde_pieces) - 1

    def at(self, p: int) -> la.SubspaceBasis:
        n2 = self.realization.module_dim ** 2
        if p < self.lo:
            return la.zero_space(n2)
        if p > self.hi:
            return self.realization.algebra
        return self.tilde_pieces[p - self.lo]

    __getitem__ = at

    def indices(self) -> range:
        return range(self.lo, self.hi + 1)

    def is_monotone(self) -> bool:
        return all(la.subspace_contains(self.at(p + 1), self.at(p))
                   for p in range(self.lo - 1, self.hi + 1))

    def same_as(self, other: "LieFiltration") -> bool:
        lo = min(self.lo, other.lo) - 1
        hi = max(self.hi, other.hi) + 1
        return all(self.at(p) == other.at(p) for p in range(lo, hi + 1))


@dataclass(frozen=True, eq=False)
class LieGrading:
    realization: RootSystemRealization
    h: CoweightH
    pieces: dict       # p -> SubspaceBasis of g_p (flattened matrices)
    depth: int

    def piece(self, p: int) -> la.SubspaceBasis:
        n2 = self.realization.module_dim ** 2
        return self.pieces.get(p, la.zero_space(n2))

    def dim(self, p: int) -> int:
        return self.piece(p).dim

    def filtration(self) -> LieFiltration:
        k = self.depth
        acc = la.zero_space(self.realization.module_dim ** 2)
        tilde = []
        for p in range(-k, k + 1):
            acc = la.subspace_sum(acc, self.piece(p))
            tilde.append(acc)
        return LieFiltration(self.realization, -k, tuple(tilde), self)

    def opposite_filtration(self) -> LieFiltration:
        """Filtration ``sum_{q >= -p} g_q``: the one attached to the grading by ``-h``."""
        k = self.depth
        acc = la.zero_space(self.realization.module_dim ** 2)
        tilde = []
        for p in range(-k, k + 1):
            acc = la.subspace_sum(acc, self.piece(-p))
            tilde.append(acc)
        return LieFiltration(self.realization, -k, tuple(tilde), self)


def bracket_violations(grading: LieGrading) -> list[tuple[int, int]]:
    """Pairs ``(p, q)`` with ``[g_p, g_q]`` not contained in ``g_{p+q}``."""
    n = grading.realization.module_dim
    bad = []
    for p, sp in grading.pieces.items():
        for q, sq in grading.pieces.items():
            target = grading.piece(p + q)
            for x in sp.basis:
                for y in sq.basis:
                    c = la.commutator(la.unflatten(x, n, n), la.unflatten(y, n, n))
                    if not target.contains_vector(la.flatten(c)):
                        bad.append((p, q))
                        break
                else:
                    continue
                break
    return bad


def _check_grading_element(realization: RootSystemRealization, h: CoweightH) -> None:
    realization.check_h(h)
    for v in realization.simple_values(h):
        if v.denominator != 1 or v < 0:
            raise DomainError(
                f"h = {h} is not dominant integral: simple-root values {realization.simple_values(h)}"
            )


def compute_grading(realization: RootSystemRealization, h: CoweightH) -> LieGrading:
    """Grading of ``g`` by ``ad h``, computed as eigenspaces and cross-checked
    against the root-space description."""
    _check_grading_element(realization, h)
    return _compute_grading(realization, h)


@lru_cache(maxsize=256)
def _compute_grading(realization: RootSystemRealization, h: CoweightH) -> LieGrading:
    n2 = realization.module_dim ** 2
    rs = realization.root_system
    values = {r: pair(r, h) for r in rs.roots}
    k = max([0] + list(values.values()))
    hm = realization.h_matrix(h)
    basis = [la.flatten(x) for x in realization.lie_basis]
    images = [la.flatten(la.commutator(hm, x)) for x in realization.lie_basis]
    pieces = {}
    for p in range(-k, k + 1):
        # X = sum c_b B_b with [h, X] = p X, solved in the coordinates c
        rows = [tuple(im[idx] - p * b[idx] for b, im in zip(basis, images)) for idx in range(n2)]
        coords = la.nullspace(rows)
        eig = la.span((_combine(c, basis, n2) for c in coords.basis), n2)
        vecs = [la.flatten(realization.root_vectors[r]) for r in rs.roots if values[r] == p]
        if p == 0:
            vecs += [la.flatten(c) for c in realization.cartan_basis]
        if eig != la.span(vecs, n2):
            raise AssertionError(f"eigenspace and root-space descriptions of g_{p} disagree")
        if eig.dim:
            pieces[p] = eig
    if sum(s.dim for s in pieces.values()) != realization.dim:
        raise AssertionError("graded pieces do not exhaust g")
    return LieGrading(realization, h, pieces, k)


def _combine(coeffs, vectors, n: int) -> list:
    acc = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                if x:
                    acc[i] = acc[i] + c * x
    return acc


@dataclass(frozen=True, eq=False)
class ModuleGrading:
    """``V = V_lo + ... + V_hi`` with ``V_i = ker(h + i)`` and its flag.

    ``m = chi(h)``; for a self-dual module the index range is ``[-m, m]``.
    """

    realization: RootSystemRealization
    h: CoweightH
    m: int
    lo: int
    pieces: dict     # i -> SubspaceBasis of V_i
    flag: Flag

    @property
    def hi(self) -> int:
        return self.lo + len(self.flag.subspaces) - 1

    def piece(self, i: int) -> la.SubspaceBasis:
        return self.pieces.get(i, la.zero_space(self.realization.module_dim))

    def codim_sum(self, lo: int | None = None, hi: int | None = None) -> int:
        lo = -self.m if lo is None else lo
        hi = self.m if hi is None else hi
        n = self.realization.module_dim
        return sum(n - self.flag.at(s).dim for s in range(lo, hi + 1))


def compute_module_grading(realization: RootSystemRealization, h: CoweightH) -> ModuleGrading:
    realization.check_h(h)
    if not dual_lattice_check(h, realization):
        raise DomainError(f"h = {h} is not in the dual of the weight lattice of {realization.name}")
    n = realization.module_dim
    hm = realization.h_matrix(h)
    eigen = [int(_pair_raw(w, h)) for w in realization.module_weights]
    m = int(_pair_raw(realization.highest_weight, h))
    lo, hi = -max(eigen), -min(eigen)
    pieces = {}
    flag_spaces = {}
    acc = la.zero_space(n)
    for i in range(lo, hi + 1):
        shifted = tuple(
            tuple(x + i if a == b else x for b, x in enumerate(row)) for a, row in enumerate(hm)
        )
        vi = la.nullspace(shifted)
        if vi.dim:
            pieces[i] = vi
        acc = la.subspace_sum(acc, vi)
        flag_spaces[i] = acc
    if acc.dim != n:
        raise AssertionError("eigenspaces of h do not exhaust V")
    return ModuleGrading(realization, h, m, lo, pieces, Flag.from_mapping(n, flag_spaces))


def tangent_basis(realization: RootSystemRealization, h: CoweightH) -> list[tuple[tuple, int]]:
    """Monomials ``z^d x_alpha`` (alpha positive, ``0 <= d < alpha(h)``) spanning the
    tangent space at one point."""
    _check_grading_element(realization, h)
    return [(a, d) for a in realization.root_system.positive_roots for d in range(pair(a, h))]


def point_dimension(realization: RootSystemRealization, h: CoweightH) -> int:
    """``sum_s s * dim g_s`` for the grading defined by ``h``."""
    gr = compute_grading(realization, h)
    return sum(s * gr.dim(s) for s in range(1, gr.depth + 1))


def adjoint_orbit_dim(realization: RootSystemRealization) -> int:
    # the center of gl(n) acts trivially under Ad
    return realization.dim - realization.center_dim


def moduli_breakdown(realization: RootSystemRealization, hs: Sequence[CoweightH]) -> dict:
    per_point = []
    for h in hs:
        gr = compute_grading(realization, h)
        per_point.append({
            "h": [str(c) for c in h.coords],
            "depth": gr.depth,
            "graded_dims": {str(p): gr.dim(p) for p in range(-gr.depth, gr.depth + 1)},
            "fixed_gamma": sum(s * gr.dim(s) for s in range(1, gr.depth + 1)),
        })
    fixed = sum(p["fixed_gamma"] for p in per_point)
    moving = fixed + len(per_point)
    mod_ad = moving - adjoint_orbit_dim(realization) if per_point else 0
    return {
        "per_point": per_point,
        "total": {"fixed_gamma": fixed, "moving_gamma": moving, "moving_gamma_mod_adG": mod_ad},
    }


def moduli_dimension(realization: RootSystemRealization, hs: Sequence[CoweightH],
                     mode: str = "fixed_gamma") -> int:
    """Moduli count: fixed support, moving support, or moving support modulo ``Ad G``."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not hs:
        return 0
    return moduli_breakdown(realization, hs)["total"][mode]
