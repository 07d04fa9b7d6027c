"""
Bell-family polynomial evaluators.

Dobinski-type families (degenerate Bell, dimorphic degenerate Bell,
degenerate Lah-Bell and its zero-truncated variant) are evaluated at an
EvalPoint. In the finite regime (1/λ = M a positive integer) the series
stops at index M because (1)_{k,λ} = 0 for k > M, and the result is an
exact Fraction. In the truncated regime (1/λ a negative integer, |λx| < 1)
the result is a certified Interval.

Finite-sum families (fully degenerate Bell, Lah-Bell) take (x, λ) directly
and accept every rational argument, including λ = 0.

Each family also has an independent generating-function route used by the
verification suite.
"""

import logging
from fractions import Fraction
from typing import Callable, Iterator, Optional, Union

from app.core.arith import degen_exp_exact, lambda_falling, rising_factorial
from app.core.exceptions import DivisionByZero, PoleError, RegimeError
from app.core.interval import ExactOrInterval
from app.core.rational_io import to_exact
from app.schemas import EvalPoint, EvalRegime, TruncationBudget
from app.services.power_series import (
    FormalPowerSeries,
    egf_coefficient,
    ps_compose,
    ps_degen_exp,
    ps_mul,
    ps_power,
    ps_reciprocal_linear,
)
from app.services.triangle_service import lah, stirling1_classical, stirling2_deg
from app.services.truncation import certified_sum

logger = logging.getLogger(__name__)

Weight = Callable[[int], Fraction]


def _dobinski_terms(p: EvalPoint, weight: Weight) -> Iterator[Fraction]:
    """x^k (1)_{k,λ} / k! · weight(k) for k = 0, 1, 2, ..."""
    base = Fraction(1)
    k = 0
    while True:
        yield base * weight(k)
        # x^{k+1}(1)_{k+1,λ}/(k+1)! from x^k(1)_{k,λ}/k!
        base = base * p.x * (1 - k * p.lam) / (k + 1)
        if base == 0:
            # every later term is zero
            return
        k += 1


def _dobinski(p: EvalPoint, weight: Weight, budget: Optional[TruncationBudget], family: str) -> ExactOrInterval:
    """e_λ^{-1}(x) · sum_k x^k (1)_{k,λ} weight(k) / k!"""
    if p.regime == EvalRegime.CLASSICAL_LIMIT:
        raise RegimeError(f"{family} needs a Dobinski regime; λ = 0 is only supported by finite-sum families")
    normalizer = p.normalizer
    if normalizer == 0:
        raise PoleError(f"e_λ(x) = 0 at x={p.x}, λ={p.lam}")
    if p.x == 0:
        return weight(0) / normalizer

    if p.regime == EvalRegime.FINITE_DOBINSKI:
        total = Fraction(0)
        for k, term in enumerate(_dobinski_terms(p, weight)):
            if k > p.dobinski_limit:
                break
            total += term
        return total / normalizer

    if budget is None:
        from app.core.config import settings

        budget = settings.default_budget()
    logger.debug(f"{family}: certified truncation at x={p.x}, λ={p.lam}")
    return certified_sum(
        _dobinski_terms(p, weight),
        limit_ratio=abs(p.lam * p.x),
        budget=budget,
        nonnegative=p.x >= 0,
        scale=1 / normalizer,
    )


def bell_deg(n: int, p: EvalPoint, budget: Optional[TruncationBudget] = None) -> ExactOrInterval:
    """Bel_{n,λ}(x) = e_λ^{-1}(x) sum_k x^k (1)_{k,λ} (k)_{n,λ} / k!"""
    return _dobinski(p, lambda k: lambda_falling(k, n, p.lam), budget, "bell_deg")


def dimorphic_bell(n: int, p: EvalPoint, budget: Optional[TruncationBudget] = None) -> ExactOrInterval:
    """B_{n,λ}(x) = e_λ^{-1}(x) sum_k (1)_{k,λ} x^k k^n / k!"""
    return _dobinski(p, lambda k: Fraction(k ** n), budget, "dimorphic_bell")


def lah_bell_deg(n: int, p: EvalPoint, budget: Optional[TruncationBudget] = None) -> ExactOrInterval:
    """B^L_{n,λ}(x) = e_λ^{-1}(x) sum_m <m>_n (1)_{m,λ} x^m / m!"""
    return _dobinski(p, lambda m: rising_factorial(m, n), budget, "lah_bell_deg")


def lah_bell_zt(n: int, p: EvalPoint, budget: Optional[TruncationBudget] = None) -> ExactOrInterval:
    """
    B^{(L,0)}_{n,λ}(x): 1 at n = 0, else B^L_{n,λ}(x) / (1 - e_λ^{-1}(x)).

    Raises:
        DivisionByZero: x = 0 and n >= 1
    """
    if p.regime == EvalRegime.CLASSICAL_LIMIT:
        raise RegimeError("lah_bell_zt needs a Dobinski regime")
    if n == 0:
        return Fraction(1)
    if p.x == 0:
        raise DivisionByZero("1 - e_λ^{-1}(0) = 0: zero-truncated Lah-Bell undefined at x = 0")
    return lah_bell_deg(n, p, budget) / (1 - 1 / p.normalizer)


def fully_degen_bell(n: int, x: Union[Fraction, int, str], lam: Union[Fraction, int, str]) -> Fraction:
    """β_{n,λ}(x) = sum_k S_{2,λ}(n, k)(x)_{k,λ}"""
    x, lam = to_exact(x), to_exact(lam)
    return sum((stirling2_deg(n, k, lam) * lambda_falling(x, k, lam) for k in range(n + 1)), Fraction(0))


def lah_bell(n: int, x: Union[Fraction, int, str]) -> Fraction:
    """B^L_n(x) = sum_k L(n, k) x^k"""
    x = to_exact(x)
    return sum((lah(n, k) * x ** k for k in range(n + 1)), Fraction(0))


def bell_deg_closed_form(n: int, x: Union[Fraction, int, str], lam: Union[Fraction, int, str]) -> Fraction:
    """
    Finite form Bel_{n,λ}(x) = sum_k S_{2,λ}(n, k) x^k (1)_{k,λ} / (1 + λx)^k.

    Obtained by expanding (x)_{n,λ} in the falling-factorial basis and using
    the closed falling-factorial moments; valid at every λ with 1 + λx != 0,
    including λ = 0 where it gives the ordinary Bell polynomial.
    """
    x, lam = to_exact(x), to_exact(lam)
    denominator = 1 + lam * x
    if denominator == 0:
        raise PoleError(f"1 + λx = 0 at x={x}, λ={lam}")
    return sum(
        (stirling2_deg(n, k, lam) * x ** k * lambda_falling(1, k, lam) / denominator ** k for k in range(n + 1)),
        Fraction(0),
    )


def dimorphic_bell_closed_form(n: int, x: Union[Fraction, int, str], lam: Union[Fraction, int, str]) -> Fraction:
    """B_{n,λ}(x) = sum_k S_2(n, k) x^k (1)_{k,λ} / (1 + λx)^k, from x^n = sum_k S_2(n, k)(x)_k"""
    x, lam = to_exact(x), to_exact(lam)
    denominator = 1 + lam * x
    if denominator == 0:
        raise PoleError(f"1 + λx = 0 at x={x}, λ={lam}")
    return sum(
        (stirling2_deg(n, k, 0) * x ** k * lambda_falling(1, k, lam) / denominator ** k for k in range(n + 1)),
        Fraction(0),
    )


def fully_degen_bell_oracle(n: int, x: Union[Fraction, int, str], lam: Union[Fraction, int, str]) -> Fraction:
    """n! [t^n] e_λ^x(e_λ(t) - 1), composed as truncated power series"""
    inner = ps_degen_exp(1, lam, n).shift_constant(-1)
    return egf_coefficient(ps_compose(ps_degen_exp(x, lam, n), inner), n)


def ordinary_bell_oracle(n: int, x: Union[Fraction, int, str]) -> Fraction:
    """n! [t^n] e^{x(e^t - 1)}"""
    return fully_degen_bell_oracle(n, x, 0)


def lah_bell_oracle(n: int, x: Union[Fraction, int, str]) -> Fraction:
    """n! [t^n] e^{x t/(1-t)}"""
    t = FormalPowerSeries.variable(n)
    inner = ps_mul(t, ps_reciprocal_linear(1, n))
    return egf_coefficient(ps_compose(ps_degen_exp(x, 0, n), inner), n)


def _degen_exp_of_geometric(x: Fraction, lam: Fraction, order: int) -> FormalPowerSeries:
    """
    Series of e_λ(x/(1-t)) = (1 + λx/(1-t))^{1/λ} for integer 1/λ.

    With c = 1 + λx and e = 1/λ: (c - t)^e (1-t)^{-e} for e > 0 and
    (1-t)^{|e|} (c - t)^{-|e|} for e < 0.
    """
    inverse = 1 / lam
    if inverse.denominator != 1:
        raise RegimeError(f"generating-function route needs 1/λ an integer, got λ={lam}")
    e = inverse.numerator
    c = 1 + lam * x
    linear_c = FormalPowerSeries.from_coeffs([c, -1], order)
    linear_1 = FormalPowerSeries.from_coeffs([1, -1], order)
    if e > 0:
        return ps_mul(ps_power(linear_c, e), ps_power(ps_reciprocal_linear(1, order), e))
    return ps_mul(ps_power(linear_1, -e), ps_power(ps_reciprocal_linear(c, order), -e))


def lah_bell_deg_oracle(n: int, x: Union[Fraction, int, str], lam: Union[Fraction, int, str]) -> Fraction:
    """n! [t^n] e_λ^{-1}(x) e_λ(x/(1-t))"""
    x, lam = to_exact(x), to_exact(lam)
    series = _degen_exp_of_geometric(x, lam, n)
    return egf_coefficient(series, n) / degen_exp_exact(1, lam, x)


def lah_bell_zt_oracle(n: int, x: Union[Fraction, int, str], lam: Union[Fraction, int, str]) -> Fraction:
    """n! [t^n] (e_λ(x/(1-t)) - 1) / (e_λ(x) - 1)"""
    x, lam = to_exact(x), to_exact(lam)
    normalizer = degen_exp_exact(1, lam, x)
    if normalizer == 1:
        raise DivisionByZero("e_λ(x) - 1 = 0")
    series = _degen_exp_of_geometric(x, lam, n).shift_constant(-1)
    return egf_coefficient(series, n) / (normalizer - 1)


def classical_bell_number(n: int) -> int:
    """Bell number B_n through the Bell triangle"""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


def unsigned_stirling_sum(n: int, values) -> ExactOrInterval:
    """sum_k values[k] |S_1(n, k)| for exact or certified values"""
    total: ExactOrInterval = Fraction(0)
    for k in range(n + 1):
        weight = stirling1_classical(n, k, signed=False)
        if weight:
            total = total + values[k] * weight
    return total
