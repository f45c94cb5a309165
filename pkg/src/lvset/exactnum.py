"""Exact Gaussian-rational scalars: complex numbers with Fraction parts."""

from __future__ import annotations

import re

from fractions import Fraction
from typing import Union

RationalLike = Union[int, str, Fraction]


def _frac(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class GaussianRational:
    """An exact complex scalar a + bi with rational a, b. Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        """|z|^2 as an exact Fraction."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self):
        if self.im == 0:
            return f"GQ({self.re})"
        return f"GQ({self.re}, {self.im})"

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))


GQ = GaussianRational

ZERO = GQ(0)
ONE = GQ(1)


def gq(re: RationalLike = 0, im: RationalLike = 0) -> GQ:
    return GQ(re, im)


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def format_entry(z: GQ):
    """JSON form of one matrix/vector entry: "a/b", or ["a/b", "c/d"] when imaginary."""
    if z.im == 0:
        return format_rational(z.re)
    return [format_rational(z.re), format_rational(z.im)]


_IMAGINARY_ONLY = re.compile(r"^(?P<im>[+-]?(?:\d+(?:/\d+)?)?)i$")
_REAL_PLUS_IMAGINARY = re.compile(
    r"^(?P<re>[+-]?\d+(?:/\d+)?)(?P<im>[+-](?:\d+(?:/\d+)?)?)i$")


def parse_entry(value) -> GQ:
    """Parse one matrix/vector entry: an int, a rational string "a/b",
    a complex string like "1/2-2/3i" or "i", or a [re, im] pair."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex entry must have two components, got {value!r}")
        return GQ(_parse_rational(value[0]), _parse_rational(value[1]))
    if isinstance(value, str):
        text = value.strip().replace(" ", "")
        if text.endswith("i"):
            m = _IMAGINARY_ONLY.match(text)
            re_part = Fraction(0)
            if m is None:
                m = _REAL_PLUS_IMAGINARY.match(text)
                if m is None:
                    raise ValueError(f"cannot parse entry {value!r}")
                re_part = Fraction(m.group("re"))
            im_text = m.group("im")
            if im_text in ("", "+"):
                im_part = Fraction(1)
            elif im_text == "-":
                im_part = Fraction(-1)
            else:
                im_part = Fraction(im_text)
            return GQ(re_part, im_part)
    return GQ(_parse_rational(value))


def _parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ValueError(f"not an exact rational: {value!r} (use \"a/b\" strings or ints)")
