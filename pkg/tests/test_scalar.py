from fractions import Fraction

import pytest

from matdiv.exactnum.scalar import I, ONE, ZERO, Scalar, as_scalar, format_scalar, parse_scalar


def test_parts_are_reduced():
    s = Scalar(Fraction(2, 4), Fraction(-6, 8))
    assert (s.re_num, s.re_den, s.im_num, s.im_den) == (1, 2, -3, 4)


@pytest.mark.parametrize("text,re,im", [
    ("3", 3, 0),
    ("-i", 0, -1),
    ("2i", 0, 2),
    ("1/2-3/4i", Fraction(1, 2), Fraction(-3, 4)),
    ("-5/3+i", Fraction(-5, 3), 1),
    ("+7", 7, 0),
])
def test_parse(text, re, im):
    assert parse_scalar(text) == Scalar(re, im)


@pytest.mark.parametrize("bad", ["", "i2", "1/", "abc", "1.5", "3 4"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


@pytest.mark.parametrize("text", ["0", "3", "-i", "i", "2i", "1/2-3/4i", "-5/3+i", "7/2i"])
def test_format_round_trip(text):
    assert format_scalar(parse_scalar(text)) == text


def test_field_identities():
    a = parse_scalar("1/2-3/4i")
    b = parse_scalar("-2+5/7i")
    assert (a + b) - b == a
    assert a * b / b == a
    assert a * a.inverse() == ONE
    assert I * I == -1
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a ** 3 == a * a * a
    assert a ** -2 == (a * a).inverse()


def test_mixed_operands_and_hash():
    assert Scalar(3) == 3 and Scalar(Fraction(1, 2)) == Fraction(1, 2)
    assert hash(Scalar(Fraction(1, 2))) == hash(Fraction(1, 2))
    assert 1 - Scalar(0, 1) == Scalar(1, -1)
    assert not ZERO and ONE


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_scalar(0.5)
    with pytest.raises(TypeError):
        as_scalar(1j)


def test_immutable():
    with pytest.raises(AttributeError):
        ONE.re = 2
