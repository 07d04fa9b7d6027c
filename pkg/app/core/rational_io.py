"""
Text codec for exact rationals.

Every rational that leaves the library (CSV, JSON, CLI flags) is written as
canonical "p/q", or "p" when q = 1. Floats are never accepted on input.
"""

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Any, Union

from app.core.exceptions import RationalFormatError
from app.core.interval import Interval

_RATIONAL_RE = re.compile(r"^\s*([-+]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """
    Parse "p/q" or "p" into a canonical Fraction.

    Raises:
        RationalFormatError: on malformed text or a zero denominator
    """
    match = _RATIONAL_RE.match(text)
    if not match:
        raise RationalFormatError(f"Invalid rational '{text}': expected p or p/q")
    numerator, denominator = match.group(1), match.group(2)
    if denominator is not None and int(denominator) == 0:
        raise RationalFormatError(f"Invalid rational '{text}': zero denominator")
    return Fraction(int(numerator), int(denominator) if denominator else 1)


def to_exact(value: Any) -> Fraction:
    """Coerce int, Fraction or rational text to Fraction; floats are rejected"""
    if isinstance(value, bool):
        raise RationalFormatError(f"Booleans are not rationals: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise RationalFormatError(
        f"Cannot use {type(value).__name__} value {value!r} as an exact rational"
    )


def format_rational(value: Fraction) -> str:
    value = to_exact(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_value(value: Union[Fraction, Interval]) -> str:
    """CSV rendering: exact values as p/q, intervals as lo..hi"""
    if isinstance(value, Interval):
        return f"{format_rational(value.lo)}..{format_rational(value.hi)}"
    return format_rational(value)


def value_to_json(value: Union[Fraction, Interval]) -> Any:
    if isinstance(value, Interval):
        return {"lo": format_rational(value.lo), "hi": format_rational(value.hi)}
    return format_rational(value)


def format_float(value: Union[Fraction, Interval]) -> str:
    """Decimal rendering for the --float presentation column"""
    if isinstance(value, Interval):
        return f"{float(value.lo):.15g}..{float(value.hi):.15g}"
    return f"{float(value):.15g}"
