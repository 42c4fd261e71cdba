"""Exact rationals: coercion and the ``"p/q"`` wire format."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["Fraction", "as_fraction", "format_rational", "parse_rational"]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def format_rational(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s:
        raise ValueError("empty rational literal")
    if "." in s or "e" in s.lower():
        raise ValueError(f"decimal literal {s!r} is not an exact rational; write it as p/q")
    return Fraction(s)
