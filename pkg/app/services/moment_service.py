"""
Moments of the degenerate Poisson law and its zero-truncated variant.

Three routes per moment functional E[f(X)]:
    moment_direct       pmf-weighted enumeration (certified on infinite support)
    moment_closed_form  the closed formula for that (family, truncation) pair
    moment_mc           seeded Monte Carlo mean with its standard error
The closed forms are built from triangle entries, finite Bell closed forms
and generating-function oracles, never from the enumeration itself.
"""

import logging
from fractions import Fraction
from math import comb, factorial
from typing import Optional

import numpy as np

from app.core.arith import falling_factorial, lambda_falling, rising_factorial
from app.core.exceptions import NoClosedForm
from app.core.interval import ExactOrInterval
from app.schemas import MomentFamily, MomentKind, MonteCarloEstimate, PoissonParams, TruncationBudget
from app.services.bell_service import (
    bell_deg_closed_form,
    dimorphic_bell_closed_form,
    lah_bell_deg_oracle,
    lah_bell_zt_oracle,
)
from app.services.distribution_service import Stream, draw_array, pmf_values
from app.services.triangle_service import stirling1_classical
from app.services.truncation import certified_sum

logger = logging.getLogger(__name__)


def moment_integrand(mk: MomentKind, i: int, lam: Fraction) -> Fraction:
    """f(i) for the moment functional mk"""
    n = mk.n
    if mk.kind == MomentFamily.POWER:
        return Fraction(i ** n)
    if mk.kind == MomentFamily.FALLING:
        return falling_factorial(i, n)
    if mk.kind == MomentFamily.RISING:
        return rising_factorial(i, n)
    if mk.kind == MomentFamily.LAMBDA_FALLING:
        return lambda_falling(i, n, lam)
    # C(i+n-1, n), with the n = 0 case the constant 1
    return Fraction(1) if n == 0 else Fraction(comb(i + n - 1, n))


def _is_constant_one(mk: MomentKind) -> bool:
    return mk.n == 0


def moment_direct(
    mk: MomentKind,
    p: PoissonParams,
    truncated: bool = False,
    budget: Optional[TruncationBudget] = None,
) -> ExactOrInterval:
    """
    sum_i f(i) P(X = i), exact on a finite support.

    On an infinite support the terms are nonnegative with ratio tending to
    |λ|α, so the sum comes back as a certified Interval.

    Raises:
        BudgetExhausted: the tail target was not met within budget.max_terms
    """
    if _is_constant_one(mk):
        return Fraction(1)
    if p.is_finite:
        return sum((moment_integrand(mk, i, p.lam) * value for i, value in pmf_values(p, truncated)), Fraction(0))

    if budget is None:
        from app.core.config import settings

        budget = settings.default_budget()
    terms = (moment_integrand(mk, i, p.lam) * value for i, value in pmf_values(p, truncated))
    return certified_sum(terms, limit_ratio=p.limit_ratio, budget=budget, nonnegative=True)


def falling_moment(n: int, p: PoissonParams) -> Fraction:
    """E[(X)_n] = α^n (1)_{n,λ} / (1 + λα)^n"""
    return p.alpha ** n * lambda_falling(1, n, p.lam) / (1 + p.lam * p.alpha) ** n


def moment_closed_form(mk: MomentKind, p: PoissonParams, truncated: bool = False) -> Fraction:
    """
    Closed-form value of E[f(X)].

    Full law:
        falling          α^n (1)_{n,λ} / (1 + λα)^n
        lambda-falling   Bel_{n,λ}(α) through its S_{2,λ} finite form
        power            B_{n,λ}(α) through classical S_2
        rising           sum_k B_{k,λ}(α) |S_1(n, k)|
        binomial         B^L_{n,λ}(α) / n! from its generating function
    Zero-truncated law (n >= 1): falling, lambda-falling and binomial divided
    by 1 - e_λ^{-1}(α); rising and power have no closed formula.

    Raises:
        NoClosedForm: zero-truncated rising or power moments
    """
    if _is_constant_one(mk):
        return Fraction(1)
    n = mk.n
    if truncated:
        rescale = 1 / (1 - 1 / p.normalizer)
        if mk.kind == MomentFamily.FALLING:
            return falling_moment(n, p) * rescale
        if mk.kind == MomentFamily.LAMBDA_FALLING:
            return bell_deg_closed_form(n, p.alpha, p.lam) * rescale
        if mk.kind == MomentFamily.BINOMIAL:
            return lah_bell_zt_oracle(n, p.alpha, p.lam) / factorial(n)
        raise NoClosedForm(f"no closed formula for the zero-truncated {mk.kind.value} moment")

    if mk.kind == MomentFamily.FALLING:
        return falling_moment(n, p)
    if mk.kind == MomentFamily.LAMBDA_FALLING:
        return bell_deg_closed_form(n, p.alpha, p.lam)
    if mk.kind == MomentFamily.POWER:
        return dimorphic_bell_closed_form(n, p.alpha, p.lam)
    if mk.kind == MomentFamily.RISING:
        return sum(
            (dimorphic_bell_closed_form(k, p.alpha, p.lam) * stirling1_classical(n, k, signed=False) for k in range(n + 1)),
            Fraction(0),
        )
    return lah_bell_deg_oracle(n, p.alpha, p.lam) / factorial(n)


def _vector_integrand(mk: MomentKind, draws: np.ndarray, lam: float) -> np.ndarray:
    x = draws.astype(np.float64)
    out = np.ones_like(x)
    if mk.kind == MomentFamily.POWER:
        return x ** mk.n
    for j in range(mk.n):
        if mk.kind == MomentFamily.FALLING:
            out *= x - j
        elif mk.kind == MomentFamily.RISING:
            out *= x + j
        elif mk.kind == MomentFamily.LAMBDA_FALLING:
            out *= x - j * lam
        else:
            out *= (x + j) / (j + 1)
    return out


def moment_mc(
    mk: MomentKind,
    p: PoissonParams,
    truncated: bool,
    seed: int,
    count: int,
    stream: Stream = 0,
) -> MonteCarloEstimate:
    """Sample mean of f(X) over `count` seeded draws, with standard error"""
    if _is_constant_one(mk):
        return MonteCarloEstimate(mean=1.0, stderr=0.0, count=count)
    draws = draw_array(p, seed, count, truncated=truncated, stream=stream)
    values = _vector_integrand(mk, draws, float(p.lam))
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(count)) if count > 1 else 0.0
    logger.debug(f"MC {mk} (λ={p.lam}, α={p.alpha}, truncated={truncated}): {mean:.6g} ± {stderr:.3g}")
    return MonteCarloEstimate(mean=mean, stderr=stderr, count=count)
