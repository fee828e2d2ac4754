"""Exact scalars: rationals and the projective parameter line Q ∪ {∞}."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import MalformedNumber, ZeroDenominator

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:/(\d+))?\s*$")
_INFINITY_TOKENS = ("inf", "∞")


def parse_rational(text: str) -> Fraction:
    """Parse ``[sign]digits[/digits]`` into a reduced Fraction."""
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise MalformedNumber(f"not a rational literal: {text!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ZeroDenominator(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and rational literals; floats are rejected."""
    if isinstance(value, bool):
        raise MalformedNumber("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise MalformedNumber(f"unsupported scalar type {type(value).__name__}")


@dataclass(frozen=True, order=False)
class LambdaParam:
    """A point of Q ∪ {∞}. ``value`` is None exactly for the point at infinity."""

    value: Fraction | None

    @classmethod
    def finite(cls, q: RationalLike) -> "LambdaParam":
        return cls(as_rational(q))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def is_value(self, q: RationalLike) -> bool:
        return self.value is not None and self.value == as_rational(q)

    def __str__(self) -> str:
        return "inf" if self.value is None else format_rational(self.value)


INFINITY = LambdaParam(None)


def parse_lambda(text: str) -> LambdaParam:
    if text.strip() in _INFINITY_TOKENS:
        return INFINITY
    try:
        return LambdaParam(parse_rational(text))
    except ZeroDenominator as exc:
        raise MalformedNumber(str(exc)) from exc


def as_lambda(value: LambdaParam | RationalLike) -> LambdaParam:
    if isinstance(value, LambdaParam):
        return value
    if isinstance(value, str):
        return parse_lambda(value)
    return LambdaParam.finite(value)
