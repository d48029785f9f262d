import itertools

import pytest

from matdiv.errors import DomainError
from matdiv.exactnum import linalg as la
from matdiv.grading import (
    bracket_violations,
    compute_grading,
    compute_module_grading,
    moduli_dimension,
    tangent_basis,
)
from matdiv.liecore import CoweightH, build_realization, pair


def unit_h(real):
    return CoweightH([1] + [0] * (real.root_system.eps_dim - 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_unit_h_gradings(n):
    gl = build_realization("gl", n)
    g = compute_grading(gl, unit_h(gl))
    assert g.depth == 1 and g.dim(1) == g.dim(-1) == n - 1
    if n >= 2:
        so = build_realization("D", n)
        g = compute_grading(so, unit_h(so))
        assert g.depth == 1 and g.dim(1) == g.dim(-1) == 2 * n - 2
    sp = build_realization("C", n)
    g = compute_grading(sp, unit_h(sp))
    assert g.depth == 2
    assert g.dim(1) == g.dim(-1) == 2 * n - 2
    assert g.dim(2) == g.dim(-2) == 1


def dominant_hs(real, values=(0, 1, 2)):
    rs = real.root_system
    for vals in itertools.product(values, repeat=len(rs.simple_roots)):
        if real.family == "gl":
            # gl(n): simple values plus a free trace coordinate
            h = CoweightH.from_simple_values(rs, list(vals))
            yield CoweightH([c + 1 for c in h.coords])
        else:
            yield CoweightH.from_simple_values(rs, list(vals))


GRADED = [("gl", 3), ("A", 1), ("A", 2), ("B", 2), ("C", 2), ("D", 3)]


@pytest.mark.parametrize("family,rank", GRADED)
def test_grading_invariants(family, rank):
    real = build_realization(family, rank)
    for h in dominant_hs(real):
        g = compute_grading(real, h)
        assert sum(s.dim for s in g.pieces.values()) == real.dim
        total = la.zero_space(real.module_dim ** 2)
        for s in g.pieces.values():
            total = la.subspace_sum(total, s)
        assert total == real.algebra
        for p in range(-g.depth, g.depth + 1):
            roots = sum(1 for a in real.root_system.roots if pair(a, h) == p)
            assert g.dim(p) == roots + (len(real.cartan_basis) if p == 0 else 0)
        assert bracket_violations(g) == []
        assert len(tangent_basis(real, h)) == sum(s * g.dim(s) for s in range(1, g.depth + 1))
        f = g.filtration()
        assert f.is_monotone()
        assert f.at(-g.depth) == g.piece(-g.depth) and f.at(g.depth) == real.algebra
        for p in f.indices():
            assert f.at(p).dim == sum(g.dim(q) for q in range(-g.depth, p + 1))


def test_grading_rejects_non_dominant():
    sl3 = build_realization("A", 2)
    with pytest.raises(DomainError):
        compute_grading(sl3, CoweightH.from_simple_values(sl3.root_system, [1, -1]))
    sl2 = build_realization("A", 1)
    with pytest.raises(DomainError):
        compute_grading(sl2, CoweightH(["1/3", "-1/3"]))


def test_tangent_basis_examples():
    gl4 = build_realization("gl", 4)
    assert tangent_basis(gl4, CoweightH.zero(4)) == []
    tb = tangent_basis(gl4, unit_h(gl4))
    assert len(tb) == 3 and all(d == 0 for _, d in tb)
    sp6 = build_realization("C", 3)
    tb = tangent_basis(sp6, unit_h(sp6))
    assert len(tb) == 6
    assert sorted(d for a, d in tb if a == (2, 0, 0)) == [0, 1]


def test_module_grading_examples():
    sl2 = build_realization("A", 1)
    coroot = CoweightH.from_simple_values(sl2.root_system, [2])
    mg = compute_module_grading(sl2, coroot)
    assert mg.m == 1 and mg.piece(-1).dim == mg.piece(1).dim == 1
    hw = mg.flag.at(-1)
    assert hw.dim == 1 and hw.contains_vector((1, 0))
    gl2 = build_realization("gl", 2)
    mg = compute_module_grading(gl2, CoweightH([1, 0]))
    assert mg.m == 1 and mg.flag.at(-1) == la.span([(1, 0)], 2) and mg.flag.at(0).is_full()
    for real in (gl2, sl2, build_realization("C", 2)):
        mg = compute_module_grading(real, CoweightH.zero(real.root_system.eps_dim))
        assert mg.m == 0 and mg.piece(0).is_full() and mg.flag.at(-1).is_zero() and mg.flag.at(0).is_full()


def test_module_grading_rejects_off_lattice():
    sl2 = build_realization("A", 1)
    with pytest.raises(DomainError):
        compute_module_grading(sl2, CoweightH.from_simple_values(sl2.root_system, [1]))


@pytest.mark.parametrize("family,rank", [("A", 1), ("A", 2), ("B", 2), ("C", 2), ("C", 3), ("D", 3), ("gl", 2), ("gl", 3)])
def test_module_grading_codimension_count(family, rank):
    real = build_realization(family, rank)
    n = real.module_dim
    for h in dominant_hs(real):
        try:
            mg = compute_module_grading(real, h)
        except DomainError:
            continue
        for i, v in mg.pieces.items():
            hm = real.h_matrix(h)
            for vec in v.basis:
                assert la.matvec(hm, vec) == tuple(-i * x for x in vec)
        trace = sum(real.h_matrix(h)[i][i] for i in range(n))
        # sum over s = -m..m of codim F_s equals m dim V - tr(h); zero trace gives m dim V
        assert mg.codim_sum() == mg.m * n - trace
        assert mg.flag.at(mg.m).is_full()
        assert mg.m == real.chi(h)
        if family in ("B", "C", "D"):
            assert mg.codim_sum() == mg.m * n
            for i in range(-mg.m, mg.m + 1):
                assert mg.piece(i).dim == mg.piece(-i).dim


def test_codimension_count_needs_traceless_h():
    gl2 = build_realization("gl", 2)
    mg = compute_module_grading(gl2, CoweightH([1, 0]))
    assert mg.codim_sum() == 1 != mg.m * 2


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("g", [1, 2, 3])
def test_moduli_dimension_examples(n, g):
    gl = build_realization("gl", n)
    assert moduli_dimension(gl, [unit_h(gl)] * (n * g), "moving_gamma_mod_adG") == n * n * (g - 1) + 1
    so = build_realization("D", n)
    assert moduli_dimension(so, [unit_h(so)] * (n * g), "moving_gamma_mod_adG") == (2 * n - 1) * n * (g - 1)
    sp = build_realization("C", n)
    assert moduli_dimension(sp, [unit_h(sp)] * (n * g), "moving_gamma_mod_adG") == (2 * n + 1) * n * (g - 1)


def test_moduli_modes():
    sp = build_realization("C", 2)
    hs = [unit_h(sp)] * 3
    assert moduli_dimension(sp, hs, "fixed_gamma") == 3 * 4
    assert moduli_dimension(sp, hs, "moving_gamma") == 3 * 5
    assert moduli_dimension(sp, hs, "moving_gamma_mod_adG") == 15 - 10
    assert moduli_dimension(sp, [], "moving_gamma_mod_adG") == 0
    with pytest.raises(ValueError):
        moduli_dimension(sp, hs, "bogus")
