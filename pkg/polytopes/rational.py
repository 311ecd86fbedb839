"""
Exact rational helpers shared by every polytope module.
"""

import math
from collections.abc import Iterable
from fractions import Fraction
from numbers import Rational

from django_transport_polytopes.polytopes.exceptions import InvalidMargins


def parse_rational(value) -> Fraction:
    """
    Parse a margin entry into a Fraction.

    Accepts ints, Fractions and strings of the form "p/q" or "p".
    Floats are rejected: their binary expansion is not the rational
    the caller meant.
    """
    if isinstance(value, bool):
        raise InvalidMargins(f"Not a rational: {value!r}")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in '.eE'):
            raise InvalidMargins(f"Not a rational string: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidMargins(f"Not a rational string: {value!r}") from exc
    raise InvalidMargins(f"Not a rational: {value!r}")


def format_rational(value: Fraction | int) -> str:
    """Lowest-terms "p/q" with q > 0; integers become "p/1"."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_matrix(rows: Iterable[Iterable[Fraction | int]]) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in rows]


def denominator_lcm(values: Iterable[Fraction]) -> int:
    return math.lcm(*(Fraction(v).denominator for v in values))


def is_integral(value: Fraction) -> bool:
    return Fraction(value).denominator == 1
