from fractions import Fraction

import pytest

from matdiv.errors import ConfigurationError, DomainError
from matdiv.exactnum import linalg as la
from matdiv.liecore import (
    CoweightH,
    build_realization,
    build_root_system,
    dual_lattice_check,
    pair,
    realization_from_tag,
    weight_lattices,
)

CASES = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 2), ("D", 3), ("D", 4)]


def expected_root_count(family, l):
    return {"A": l * (l + 1), "B": 2 * l * l, "C": 2 * l * l, "D": 2 * l * (l - 1)}[family]


@pytest.mark.parametrize("family,l", CASES)
def test_root_counts_and_positivity(family, l):
    rs = build_root_system(family, l)
    assert len(rs.roots) == expected_root_count(family, l) == len(set(rs.roots))
    neg = {tuple(-x for x in r) for r in rs.positive_roots}
    assert set(rs.roots) == set(rs.positive_roots) | neg
    assert not neg & set(rs.positive_roots)
    for r in rs.positive_roots:
        coeffs = rs.simple_coefficients(r)
        assert all(isinstance(c, int) and c >= 0 for c in coeffs)


def test_spec_examples():
    assert len(build_root_system("A", 1).roots) == 2
    assert len(build_root_system("C", 2).roots) == 8
    assert len(build_root_system("D", 3).roots) == 12


@pytest.mark.parametrize("bad", [("E", 6), ("D", 1), ("A", 0)])
def test_unsupported(bad):
    with pytest.raises(ConfigurationError):
        build_root_system(*bad)


def test_adjoint_only_for_a1():
    with pytest.raises(ConfigurationError):
        build_realization("B", 2, "adjoint")


REALS = [("gl", 2), ("gl", 3), ("A", 1), ("A", 2), ("B", 2), ("C", 2), ("C", 3), ("D", 3)]


def _realization_ids(params):
    return [f"{f}{r}" for f, r in params]


@pytest.mark.parametrize("family,rank", REALS, ids=_realization_ids(REALS))
def test_realization_identities(family, rank):
    real = build_realization(family, rank)
    rs = real.root_system
    n = real.module_dim
    # [h, x_alpha] = alpha(h) x_alpha on the Cartan basis and on random h
    for h in real.cartan_basis:
        for a, x in real.root_vectors.items():
            br = la.commutator(h, x)
            i, j = next((i, j) for i in range(n) for j in range(n) if x[i][j])
            value = br[i][j] / x[i][j]
            assert br == la.matscale(value, x)
    hcoords = CoweightH([k + 1 for k in range(rs.eps_dim)])
    if family == "A":
        hcoords = CoweightH.from_simple_values(rs, [1] * rs.rank)
    hm = real.h_matrix(hcoords)
    for a, x in real.root_vectors.items():
        assert la.commutator(hm, x) == la.matscale(pair(a, hcoords), x)
    # weights, faithfulness, tracelessness
    assert sum(real.weight_multiplicities().values()) == n
    basis = [la.flatten(x) for x in real.lie_basis]
    assert la.rank(basis) == real.dim
    if family != "gl":
        for x in real.root_vectors.values():
            assert sum(x[i][i] for i in range(n)) == 0


@pytest.mark.parametrize("family,rank", REALS, ids=_realization_ids(REALS))
def test_root_vector_brackets(family, rank):
    real = build_realization(family, rank)
    rs = real.root_system
    for a in rs.roots:
        for b in rs.roots:
            s = tuple(x + y for x, y in zip(a, b))
            if s in rs:
                br = la.commutator(real.root_vectors[a], real.root_vectors[b])
                assert not la.is_zero_matrix(br)
                target = la.span([la.flatten(real.root_vectors[s])], real.module_dim ** 2)
                assert target.contains_vector(la.flatten(br))


@pytest.mark.parametrize("family,rank", [("B", 2), ("C", 3), ("D", 3)])
def test_weight_symmetry(family, rank):
    w = build_realization(family, rank).module_weights
    assert sorted(w) == sorted(tuple(-x for x in v) for v in w)


def test_spec_realization_examples():
    sl2 = build_realization("A", 1)
    coroot = CoweightH.from_simple_values(sl2.root_system, [2])
    # weights evaluated on the coroot: +-1 for the defining module, +-2 and 0 for the adjoint
    assert sorted(pair(w, coroot) for w in sl2.module_weights) == [-1, 1]
    adj = build_realization("A", 1, "adjoint")
    assert sorted(pair(w, coroot) for w in adj.module_weights) == [-2, 0, 2]
    assert build_realization("C", 4).module_dim == 8


def test_pair_examples():
    gl4 = build_realization("gl", 4)
    h = CoweightH([1, 0, 0, 0])
    for j in range(1, 4):
        a = tuple(1 if i == 0 else (-1 if i == j else 0) for i in range(4))
        assert pair(a, h) == 1
    sp = build_realization("C", 3)
    h = CoweightH([1, 0, 0])
    assert pair((2, 0, 0), h) == 2
    x = sp.root_vectors[(2, 0, 0)]
    assert la.commutator(sp.h_matrix(h), x) == la.matscale(2, x)
    zero = CoweightH.zero(3)
    assert all(pair(a, zero) == 0 for a in sp.root_system.roots)
    for a in sp.root_system.roots:
        assert pair(tuple(-v for v in a), h) == -pair(a, h)


def test_pair_rejects_fractional():
    with pytest.raises(DomainError):
        pair((1, 0), CoweightH([Fraction(1, 2), 0]))


def test_dual_lattice_sl2():
    d = build_realization("A", 1)
    adj = build_realization("A", 1, "adjoint")
    coroot = CoweightH.from_simple_values(d.root_system, [2])
    half = CoweightH.from_simple_values(d.root_system, [1])
    assert half.coords == (Fraction(1, 2), Fraction(-1, 2))
    assert dual_lattice_check(coroot, d) is True
    assert dual_lattice_check(half, adj) is True
    assert dual_lattice_check(half, d) is False


@pytest.mark.parametrize("family,rank", [("A", 1), ("A", 2), ("B", 2), ("C", 2), ("D", 3), ("gl", 3)])
def test_weight_lattice_inclusions(family, rank):
    lat = weight_lattices(build_realization(family, rank))
    assert lat.root_lattice_in_weight_lattice()
    assert lat.dual_in_root_dual()


def test_tags():
    assert realization_from_tag("A1adj").module_tag == "adjoint"
    assert realization_from_tag("C2d").module_dim == 4
    assert realization_from_tag("gl3d").dim == 9
    with pytest.raises(ConfigurationError):
        realization_from_tag("E8d")


@pytest.mark.parametrize("family,rank,dim", [("A", 1, 3), ("A", 3, 15), ("gl", 3, 9), ("B", 2, 10),
                                             ("B", 3, 21), ("C", 3, 21), ("D", 2, 6), ("D", 4, 28)])
def test_algebra_dimensions(family, rank, dim):
    assert build_realization(family, rank).dim == dim
