"""
Exact scalar primitives.

ExactScalar is fractions.Fraction (always canonical: positive denominator,
reduced). DegenParam is the degeneracy parameter λ, also a Fraction; λ = 0
is legal here and handled by explicit branches, never by limits.
"""

import logging
from fractions import Fraction
from typing import Union

from app.core.exceptions import NonIntegerExponent, NonIntegerLambda, PoleError
from app.core.rational_io import to_exact

logger = logging.getLogger(__name__)

ExactScalar = Fraction
DegenParam = Fraction
ScalarLike = Union[Fraction, int, str]


def falling_factorial(x: ScalarLike, n: int) -> Fraction:
    """(x)_n = x(x-1)...(x-n+1), (x)_0 = 1"""
    _check_order(n)
    x = to_exact(x)
    result = Fraction(1)
    for j in range(n):
        result *= x - j
    return result


def rising_factorial(x: ScalarLike, n: int) -> Fraction:
    """<x>_n = x(x+1)...(x+n-1), <x>_0 = 1"""
    _check_order(n)
    x = to_exact(x)
    result = Fraction(1)
    for j in range(n):
        result *= x + j
    return result


def lambda_falling(x: ScalarLike, n: int, lam: ScalarLike) -> Fraction:
    """(x)_{n,λ} = x(x-λ)...(x-(n-1)λ); x^n at λ = 0"""
    _check_order(n)
    x, lam = to_exact(x), to_exact(lam)
    if lam == 0:
        return x ** n
    result = Fraction(1)
    for j in range(n):
        result *= x - j * lam
    return result


def degen_exp_exact(x: ScalarLike, lam: ScalarLike, t: ScalarLike) -> Fraction:
    """
    e_λ^x(t) = (1 + λt)^(x/λ) as an exact rational.

    Integer exponents always succeed unless 1 + λt = 0 with a negative
    exponent. A non-integer exponent p/q succeeds only when 1 + λt is a
    positive perfect q-th power.

    Raises:
        NonIntegerExponent: x/λ is not an integer and no exact root exists
        PoleError: 1 + λt = 0 with a negative exponent
    """
    x, lam, t = to_exact(x), to_exact(lam), to_exact(t)
    if lam == 0:
        raise NonIntegerExponent("e_λ at λ = 0 is the classical exponential, not rational")
    exponent = x / lam
    base = 1 + lam * t
    if base == 0 and exponent < 0:
        raise PoleError(f"(1 + λt) = 0 raised to negative exponent {exponent}")
    if exponent.denominator == 1:
        return base ** exponent.numerator
    root = exact_root(base, exponent.denominator)
    if root is None:
        raise NonIntegerExponent(
            f"(1 + λt)^(x/λ) = ({base})^({exponent}) is not rational; use the power-series route"
        )
    if root == 0 and exponent < 0:
        raise PoleError(f"zero base raised to negative exponent {exponent}")
    return root ** exponent.numerator


def degen_log_exact(t: ScalarLike, lam: ScalarLike) -> Fraction:
    """
    log_λ(1 + t) = ((1 + t)^λ - 1) / λ for nonzero integer λ.

    Raises:
        NonIntegerLambda: λ is zero or not an integer
        PoleError: 1 + t = 0 with λ < 0
    """
    t, lam = to_exact(t), to_exact(lam)
    if lam == 0 or lam.denominator != 1:
        raise NonIntegerLambda(f"log_λ has an exact closed form only for nonzero integer λ, got {lam}")
    base = 1 + t
    if base == 0 and lam < 0:
        raise PoleError("(1 + t) = 0 raised to a negative power")
    return (base ** lam.numerator - 1) / lam


def exact_root(value: Fraction, q: int) -> Union[Fraction, None]:
    """Nonnegative rational q-th root of a nonnegative rational, or None if irrational"""
    value = to_exact(value)
    if value < 0:
        return None
    num = integer_root(value.numerator, q)
    den = integer_root(value.denominator, q)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def integer_root(n: int, q: int) -> Union[int, None]:
    """Exact integer q-th root of n >= 0, or None"""
    if n < 2:
        return n
    # Newton iteration on integers, seeded above the root
    r = 1 << ((n.bit_length() + q - 1) // q)
    while True:
        s = ((q - 1) * r + n // r ** (q - 1)) // q
        if s >= r:
            break
        r = s
    return r if r ** q == n else None


def _check_order(n: int) -> None:
    if n < 0:
        raise ValueError(f"factorial order must be nonnegative, got {n}")
