import random

import pytest

from matdiv.errors import InsufficientPrecisionError
from matdiv.exactnum import linalg as la
from matdiv.exactnum.scalar import ONE
from matdiv.exactnum.series import (
    TruncatedLaurentSeries as S,
    TruncatedMatrixSeries as T,
    series_invert,
    series_smith,
)


def test_normalized_valuation():
    s = S([0, 0, 3, 1, 0], start=-2, order=5)
    assert s.valuation == 0 and s.order == 5 and s.coeffs == (3, 1)


def test_precision_propagates_pessimistically():
    a = S([1, 2], start=-1, order=3)      # known on [-1, 3)
    b = S([1], start=2, order=4)          # known on [2, 4)
    p = a * b
    assert p.order == min(3 + 2, 4 - 1)
    assert (a + b).order == 3
    with pytest.raises(InsufficientPrecisionError):
        p.coefficient(p.order)


def test_exact_zero_absorbs():
    z = S.zero()
    a = S([1, 1], order=2)
    assert (z * a).is_exact() and (z * a).is_zero()


def test_scalar_inverse_geometric():
    inv = S([1, -1], order=None).inverse(6)
    assert [inv.coefficient(d) for d in range(6)] == [1] * 6
    assert inv.order == 6


def test_invert_unipotent_geometric_series():
    n = ((0, 1, 0), (0, 0, 1), (0, 0, 0))
    m = T.build([la.identity(3), n], 0, None)
    inv = series_invert(m, 5)
    n2 = la.matmul(la.to_matrix(n), la.to_matrix(n))
    assert inv.coefficient(0) == la.identity(3)
    assert inv.coefficient(1) == la.matscale(-1, la.to_matrix(n))
    assert inv.coefficient(2) == n2
    assert inv.coefficient(3) == la.zeros(3, 3)
    assert (m @ inv).agrees_with(T.identity(3))


def test_invert_diagonal_monomials():
    inv = series_invert(T.diagonal_monomials([1, 2]))
    assert inv.is_zero() is False and inv.order is None
    assert inv.agrees_with(T.diagonal_monomials([-1, -2]))
    assert inv.valuation == -2


def test_invert_jordan_block():
    m = T.build([((0, 1), (0, 0)), la.identity(2)], 0, None)
    inv = series_invert(m)
    # multiply-back oracle
    assert (m @ inv).agrees_with(T.identity(2)) and (inv @ m).agrees_with(T.identity(2))
    assert inv.valuation == -2
    assert inv.coefficient(-2) == la.to_matrix(((0, -1), (0, 0)))
    assert inv.coefficient(-1) == la.identity(2)


def test_singular_within_precision():
    m = T.build([((1, 1), (1, 1))], 0, 3)
    with pytest.raises(InsufficientPrecisionError):
        series_invert(m)


def _random_matrix_series(rng, n, terms, low=0):
    mats = [tuple(tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(n)) for _ in range(terms)]
    return T.build(mats, low, low + terms, (n, n))


def test_random_inverse_identity_in_window():
    rng = random.Random(5)
    done = 0
    while done < 15:
        m = _random_matrix_series(rng, rng.randint(2, 3), 6, rng.randint(-1, 1))
        try:
            inv = series_invert(m)
        except InsufficientPrecisionError:
            continue
        prod = m @ inv
        assert prod.agrees_with(T.identity(m.rows))
        assert prod.order is not None and prod.order > 0
        done += 1


def test_smith_diagonalizes():
    rng = random.Random(9)
    for _ in range(10):
        m = _random_matrix_series(rng, 3, 7)
        try:
            u, exps, v = series_smith(m)
        except InsufficientPrecisionError:
            continue
        assert exps == sorted(exps)
        assert (u @ m @ v).agrees_with(T.diagonal_monomials(exps))
        assert la.rank(u.coefficient(0)) == 3 and la.rank(v.coefficient(0)) == 3


def test_matrix_product_window():
    a = T.build([la.identity(2)], -1, 2)
    b = T.build([la.identity(2)], 1, 3)
    p = a @ b
    assert p.valuation == 0 and p.order == min(2 + 1, 3 - 1)
    assert p.coefficient(0) == la.identity(2)
