"""Exact rational helpers shared across the package."""

from __future__ import annotations

from fractions import Fraction

__all__ = ["to_fraction", "format_fraction", "ceil_frac", "floor_frac"]


def to_fraction(value) -> Fraction:
    """Coerce an int, Fraction or 'p/q' string to a Fraction.

    Floats are refused on purpose: the 1-D feasibility decisions are exact,
    and a binary float silently changes the question being asked
    (1/3 != 0.3333...).
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rational values")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {value!r} as an exact rational") from exc
    raise TypeError(
        f"expected int, Fraction or 'p/q' string, got {type(value).__name__}"
    )


def format_fraction(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator
