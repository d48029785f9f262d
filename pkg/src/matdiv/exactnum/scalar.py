"""Gaussian rationals: the exact stand-in for the complex numbers.

A :class:`Scalar` is ``re + im*i`` with ``re`` and ``im`` stored as
:class:`fractions.Fraction`.  Instances are immutable and interoperate with
``int`` and ``Fraction`` operands.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = ["Scalar", "ZERO", "ONE", "I", "as_scalar", "parse_scalar"]


class Scalar:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "Scalar":
        s = object.__new__(cls)
        object.__setattr__(s, "re", re)
        object.__setattr__(s, "im", im)
        return s

    # -- field parts, as the text format names them
    @property
    def re_num(self) -> int:
        return self.re.numerator

    @property
    def re_den(self) -> int:
        return self.re.denominator

    @property
    def im_num(self) -> int:
        return self.im.numerator

    @property
    def im_den(self) -> int:
        return self.im.denominator

    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "Scalar":
        return Scalar._make(self.re, -self.im)

    # -- arithmetic
    def __add__(self, other):
        if type(other) is not Scalar:
            if isinstance(other, (int, Rational)):
                return Scalar._make(self.re + other, self.im)
            return NotImplemented
        return Scalar._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if type(other) is not Scalar:
            if isinstance(other, (int, Rational)):
                return Scalar._make(self.re - other, self.im)
            return NotImplemented
        return Scalar._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        if isinstance(other, (int, Rational)):
            return Scalar._make(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if type(other) is not Scalar:
            if isinstance(other, (int, Rational)):
                return Scalar._make(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar._make(a * c, b)
        return Scalar._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        a, b = self.re, self.im
        if not b:
            if not a:
                raise ZeroDivisionError("Scalar division by zero")
            return Scalar._make(1 / a, b)
        n = a * a + b * b
        return Scalar._make(a / n, -b / n)

    def __truediv__(self, other):
        if type(other) is not Scalar:
            if isinstance(other, (int, Rational)):
                if not other:
                    raise ZeroDivisionError("Scalar division by zero")
                return Scalar._make(self.re / other, self.im / other)
            return NotImplemented
        if not other.im:
            if not other.re:
                raise ZeroDivisionError("Scalar division by zero")
            return Scalar._make(self.re / other.re, self.im / other.re)
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if type(other) is Scalar:
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        return format_scalar(self)

    def __reduce__(self):
        return (Scalar, (self.re, self.im))


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def as_scalar(x) -> Scalar:
    if type(x) is Scalar:
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, complex):
        raise TypeError("floating-point complex values are not accepted; use Scalar or text")
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use Fraction, int or text")
    return Scalar(x)


def _fmt_frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_scalar(s: Scalar) -> str:
    """Canonical text form ``a/b+c/di``; integer parts drop the denominator."""
    if not s.im:
        return _fmt_frac(s.re)
    if s.im == 1:
        imag = "i"
    elif s.im == -1:
        imag = "-i"
    else:
        imag = _fmt_frac(s.im) + "i"
    if not s.re:
        return imag
    sign = "" if imag.startswith("-") else "+"
    return f"{_fmt_frac(s.re)}{sign}{imag}"


_NUM = r"\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^(?P<re>[+-]?{_NUM}(?!i|/|\d))?(?:(?P<isign>[+-])?(?P<im>{_NUM})?i)?$"
)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"a/b+c/di"``-style text (``"3"``, ``"-i"``, ``"1/2-3/4i"``, ``"2i"``)."""
    if re.search(r"[\d/]\s+[\d/i]", text):
        raise ValueError(f"malformed scalar literal: {text!r}")
    t = text.replace(" ", "")
    m = _SCALAR_RE.match(t)
    if not t or m is None or (m.group("re") is None and not t.endswith("i")):
        raise ValueError(f"malformed scalar literal: {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_part = Fraction(0)
    if t.endswith("i"):
        mag = Fraction(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("re") is not None and m.group("isign") is None:
            raise ValueError(f"malformed scalar literal: {text!r}")
        im_part = -mag if m.group("isign") == "-" else mag
    return Scalar._make(re_part, im_part)
