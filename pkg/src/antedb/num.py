"""Exact rational scalars and the infinity sentinels used across the engine.

Every bound in the database is a rational number; the only non-rational
values that ever appear are the two sentinels below (an empty region has
supremum -inf, an unconstrained direction gives +inf).  Floats never enter
core arithmetic; the sentinels are float infinities purely because they
compare correctly against Fraction.
"""

from __future__ import annotations

from fractions import Fraction

Q = Fraction

POS_INF = float("inf")
NEG_INF = float("-inf")


def qparse(text: str) -> Fraction:
    """Parse 'p/q' or 'p' into an exact rational."""
    s = text.strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def qstr(value) -> str:
    """Canonical text form: integers bare, otherwise p/q; sentinels as inf/-inf."""
    if value == POS_INF:
        return "inf"
    if value == NEG_INF:
        return "-inf"
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def qdec(value, sig: int = 12) -> str:
    """Decimal approximation at `sig` significant digits (plot emission only)."""
    if value == POS_INF or value == NEG_INF:
        return qstr(value)
    return f"{float(Fraction(value)):.{sig}g}"
