from __future__ import annotations

from fractions import Fraction


def rational(x: Fraction | int | None) -> dict | None:
    """Exact num/den plus a display-only decimal string."""
    if x is None:
        return None
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator, "decimal": repr(float(x))}


def fmt(x: Fraction | int | None) -> str:
    if x is None:
        return "-"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
