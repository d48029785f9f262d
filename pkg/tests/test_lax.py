import random
from fractions import Fraction

import pytest

from matdiv.divisor import germ_from_h, is_section
from matdiv.errors import ConfigurationError
from matdiv.exactnum import linalg as la
from matdiv.exactnum.scalar import Scalar, as_scalar
from matdiv.lax import (
    GlobalMatrixFunction,
    SurfaceConfig,
    ambient_basis,
    bracket_global,
    build_L_space,
    build_M_space,
    build_section_space,
    lax_dimension_oracle,
    lax_violations,
    localize,
    quotient_report,
    section_dimension_oracle,
)
from matdiv.liecore import CoweightH, build_realization

GL2 = build_realization("gl", 2)
H10 = CoweightH([1, 0])


def evaluate(f, w):
    """Value of a partial-fraction function at a point away from its poles."""
    w = as_scalar(w)
    acc = la.zeros(*f.shape)
    for i, m in enumerate(f.poly):
        acc = la.matadd(acc, la.matscale(w ** i, m))
    for p, cs in f.principal.items():
        for j, m in enumerate(cs, start=1):
            acc = la.matadd(acc, la.matscale((w - p) ** (-j), m))
    return acc


def random_function(rng, n, points, max_order=2, degree=2):
    def mat():
        return [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    poly = [mat() for _ in range(rng.randint(0, degree))]
    prin = {p: [mat() for _ in range(rng.randint(1, max_order))] for p in points}
    return GlobalMatrixFunction.build((n, n), poly, prin)


def config(real, gammas, pis=(), h=None):
    h = h if h is not None else CoweightH([1] + [0] * (real.root_system.eps_dim - 1))
    return SurfaceConfig(real, tuple((g, h) for g in gammas), tuple(pis))


# -- global functions and localization


def test_ambient_dimensions():
    gl2 = GL2
    assert len(ambient_basis(config(gl2, []), {})) == 4
    assert len(ambient_basis(config(gl2, []), {5: 1})) == 8
    cfg = config(gl2, [1, 2], [(5, 1)])
    assert len(ambient_basis(cfg, {1: 1, 2: 1, 5: 1})) == 16
    assert build_L_space(config(gl2, [], [(5, 1)])).ambient_dim == 8


def test_localize_constant_and_pole():
    x = la.to_matrix([[1, 2], [3, 4]])
    c = localize(GlobalMatrixFunction.constant(x), 7, -2, 2)
    assert c.coefficient(0) == x
    assert la.is_zero_matrix(c.coefficient(1)) and la.is_zero_matrix(c.coefficient(-1))
    p = localize(GlobalMatrixFunction.pole(x, 3, 1), 3, -2, 2)
    assert p.coefficient(-1) == x
    assert la.is_zero_matrix(p.coefficient(0))


def test_localize_pole_elsewhere_geometric_series():
    x = la.to_matrix([[1, 0], [0, 2]])
    gamma, other = Scalar(2), Scalar(Fraction(1, 2))
    jet = localize(GlobalMatrixFunction.pole(x, other, 1), gamma, 0, 2)
    for j in range(3):
        expected = la.matscale(-(other - gamma) ** (-j - 1), x)
        assert jet.coefficient(j) == expected


def test_product_matches_pointwise_values():
    rng = random.Random(5)
    for _ in range(6):
        f = random_function(rng, 2, [0, 1])
        g = random_function(rng, 2, [1, -2])
        fg = f @ g
        for w in (Fraction(1, 3), 5, Fraction(-7, 4)):
            assert evaluate(fg, w) == la.matmul(evaluate(f, w), evaluate(g, w))


def test_product_localizes_to_product_of_jets():
    rng = random.Random(11)
    f = random_function(rng, 2, [0, 3])
    g = random_function(rng, 2, [0, 2])
    a, b = f.pole_order(0), g.pole_order(0)
    lo = -(a + b)
    jf = localize(f, 0, -a, 3)
    jg = localize(g, 0, -b, 3)
    prod = (jf @ jg)
    direct = localize(f @ g, 0, lo, prod.order - 1)
    assert direct.agrees_with(prod)


def test_bracket_trivial_cases():
    rng = random.Random(2)
    f = random_function(rng, 2, [1])
    assert bracket_global(f, f).is_zero()
    x = la.to_matrix([[0, 1], [0, 0]])
    y = la.to_matrix([[0, 0], [1, 0]])
    br = bracket_global(GlobalMatrixFunction.constant(x), GlobalMatrixFunction.constant(y))
    assert br.poly == (la.commutator(x, y),) and not br.principal


# -- Lax and M operator spaces


SCENES = [
    (GL2, [1], [(5, 2)]),
    (GL2, [1, 2], [(5, 1)]),
    (GL2, [0, 1, 3], [(5, 1)]),
    (GL2, [1, 2], []),
    (build_realization("A", 1), [1, 2], [(4, 1)]),
    (build_realization("gl", 3), [1], [(2, 1)]),
    (build_realization("C", 2), [1], [(3, 1)]),
    (build_realization("B", 2), [1, 2], [(3, 1)]),
]


def sl2_h(real):
    return CoweightH.from_simple_values(real.root_system, (1,))


@pytest.mark.parametrize("idx", range(len(SCENES)))
def test_lax_dimensions_match_oracle(idx):
    real, gammas, pis = SCENES[idx]
    h = sl2_h(real) if real.family == "A" else None
    cfg = config(real, gammas, pis, h)
    L, M = build_L_space(cfg), build_M_space(cfg)
    assert L.dim == lax_dimension_oracle(cfg, "L")
    assert M.dim == lax_dimension_oracle(cfg, "M")
    assert la.subspace_contains(M.coords, L.coords)


def test_zero_h_gives_ambient():
    cfg = config(GL2, [1, 2], [(5, 1)], CoweightH([0, 0]))
    L, M = build_L_space(cfg), build_M_space(cfg)
    assert L.dim == M.dim == L.ambient_dim == 4 * 2


def test_empty_gamma_m_equals_l():
    cfg = config(GL2, [], [(5, 2)])
    assert build_L_space(cfg).dim == build_M_space(cfg).dim == 12


def test_l_space_elements_pass_membership():
    cfg = config(GL2, [1, 2], [(5, 1)])
    for f in build_L_space(cfg).basis:
        assert lax_violations(f, cfg) == []


def test_m_space_allows_h_over_z():
    cfg = config(GL2, [1], [(5, 1)])
    hm = GL2.h_matrix(H10)
    f = GlobalMatrixFunction.pole(hm, 1, 1)
    M = build_M_space(cfg)
    L = build_L_space(cfg)
    assert lax_violations(f, cfg) != []
    assert M.dim == L.dim + 1 + 1
    # M contains h/(w-1) up to an element of L
    vecs = [la.flatten(b.local_coefficients(1, -1, -1)[-1]) for b in M.basis]
    assert la.span(vecs, 4).contains_vector(la.flatten(hm))


def test_bracket_closure_random_pairs():
    rng = random.Random(8)
    cfg = config(GL2, [1, 2], [(5, 1)])
    basis = build_L_space(cfg).basis
    for _ in range(10):
        f = random_combination(basis, rng)
        g = random_combination(basis, rng)
        assert lax_violations(bracket_global(f, g), cfg) == []


def random_combination(basis, rng):
    acc = basis[0].scale(0)
    for b in basis:
        acc = acc + b.scale(rng.randint(-2, 2))
    return acc


def test_config_validation():
    with pytest.raises(ConfigurationError):
        config(GL2, [1, 1])
    with pytest.raises(ConfigurationError):
        config(GL2, [1], [(1, 1)])
    with pytest.raises(ConfigurationError):
        config(GL2, [1], [(2, -1)])
    with pytest.raises(ConfigurationError):
        SurfaceConfig(GL2, ((1, H10),), (), genus=1)


# -- sections


@pytest.mark.parametrize("family,rank", [("gl", 2), ("C", 2), ("gl", 3)])
@pytest.mark.parametrize("deg", [0, 1, 2])
@pytest.mark.parametrize("ngam", [1, 2])
def test_section_dimension_matches_oracle(family, rank, deg, ngam):
    real = build_realization(family, rank)
    pis = [(10, deg)] if deg else []
    cfg = config(real, list(range(1, ngam + 1)), pis)
    assert build_section_space(cfg).dim == section_dimension_oracle(cfg)


def test_section_space_trivial_h():
    cfg = config(GL2, [1], [], CoweightH([0, 0]))
    assert build_section_space(cfg).dim == 2


def test_section_space_elements_are_sections():
    cfg = config(GL2, [1, 2], [(5, 1)])
    germ = germ_from_h(GL2, H10)
    for f in build_section_space(cfg).basis:
        for p in (1, 2):
            jet = localize(f, p, -2, 2)
            assert is_section(jet, germ)
        assert f.pole_order(5) <= 1


def test_section_space_obstructed():
    # the lowest-weight component would need a zero of order 3: it contributes nothing
    sl2 = build_realization("A", 1)
    coroot = CoweightH.from_simple_values(sl2.root_system, (2,))
    cfg = SurfaceConfig(sl2, ((1, coroot), (2, coroot), (3, coroot)), ())
    assert build_section_space(cfg).dim == section_dimension_oracle(cfg) == 4 + 0


# -- quotient


def test_quotient_report_gl2():
    cfg = config(GL2, [1, 2], [(5, 1)])
    rep = quotient_report(cfg)
    assert rep["tangent_formula"] == 2
    assert rep["localization_kernel_dim"] == 0 and rep["injective"]
    assert rep["L_in_M"] and rep["quotient_at_least_tangent"]
    assert rep["dim_quotient"] == rep["dim_M"] - rep["dim_L"]
    assert rep["excess"] == rep["dim_quotient"] - 2


def test_quotient_report_empty_gamma():
    rep = quotient_report(config(GL2, [], [(5, 1)]))
    assert rep["dim_quotient"] == 0 and rep["tangent_formula"] == 0
    assert rep["injective"] is None


def test_quotient_report_zero_h():
    rep = quotient_report(config(GL2, [1, 2], [(5, 1)], CoweightH([0, 0])))
    assert rep["dim_quotient"] == 0 and rep["tangent_formula"] == 0


@pytest.mark.parametrize("ngam,deg", [(2, 0), (2, 1), (3, 0), (3, 1)])
def test_quotient_depth_two_matches_oracle(ngam, deg):
    # with alpha(h) = 2 the quotient can fall below the tangent count at genus 0
    sl2 = build_realization("A", 1)
    coroot = CoweightH.from_simple_values(sl2.root_system, (2,))
    cfg = SurfaceConfig(sl2, tuple((p, coroot) for p in (0, 1, 2)[:ngam]), ((7, deg),) if deg else ())
    rep = quotient_report(cfg)
    assert rep["dim_quotient"] == lax_dimension_oracle(cfg, "M") - lax_dimension_oracle(cfg, "L")
    assert rep["localization_kernel_dim"] == 0
    assert rep["excess"] == {(2, 0): -1, (2, 1): 0, (3, 0): -2, (3, 1): -1}[(ngam, deg)]
