"""Exact angles in Q/Z."""

from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering

_FRACTION_RE = re.compile(r"^(0|[1-9][0-9]*)(/[1-9][0-9]*)?$")


def parse_fraction(text: str) -> Fraction:
    """Parse ``"p/q"`` (or an integer) and insist on the reduced spelling.

    ``"2/4"`` is rejected because it is not written in lowest terms; so is
    ``"1/1"``, whose canonical spelling is ``"1"``.
    """
    if not isinstance(text, str) or not _FRACTION_RE.match(text):
        raise ValueError(f"malformed fraction {text!r}")
    value = Fraction(text)
    if str(value) != text:
        raise ValueError(f"fraction {text!r} is not reduced (expected {value})")
    return value


@total_ordering
class Angle:
    """A rational number modulo 1, stored by its representative in [0, 1)."""

    __slots__ = ("_value",)

    def __init__(self, value: int | Fraction | str | "Angle" = 0):
        if isinstance(value, Angle):
            frac = value._value
        elif isinstance(value, str):
            frac = Fraction(value)
        else:
            frac = Fraction(value)
        self._value = frac - (frac.numerator // frac.denominator)

    @property
    def value(self) -> Fraction:
        return self._value

    @property
    def numerator(self) -> int:
        return self._value.numerator

    @property
    def denominator(self) -> int:
        return self._value.denominator

    def __add__(self, other):
        return Angle(self._value + Angle(other)._value)

    __radd__ = __add__

    def __sub__(self, other):
        return Angle(self._value - Angle(other)._value)

    def __rsub__(self, other):
        return Angle(Angle(other)._value - self._value)

    def __neg__(self):
        return Angle(-self._value)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return Angle(self._value * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Angle):
            return self._value == other._value
        if isinstance(other, (int, Fraction)):
            return self._value == Angle(other)._value
        return NotImplemented

    def __lt__(self, other):
        return self._value < Angle(other)._value

    def __hash__(self):
        return hash(("Angle", self._value))

    def __bool__(self):
        return self._value != 0

    def __repr__(self):
        return f"Angle({str(self._value)!r})"

    def __str__(self):
        return str(self._value)


def angle_scale(a: Angle, k: int) -> Angle:
    """Return ``k * a`` reduced modulo 1."""
    if k < 1:
        raise ValueError("scale factor must be a positive integer")
    return Angle(a) * k
