"""Rational scalars and their "p/q" string form."""

from fractions import Fraction


def parse_q(value):
    """Read a rational from an int or a decimal-free "p/q" / "p" string."""
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        s = value.strip()
        if "." in s or "e" in s.lower():
            raise ValueError(f"rational {value!r} must be written as p/q")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational {value!r}") from exc
    raise ValueError(f"cannot read {value!r} as a rational")


def format_q(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
