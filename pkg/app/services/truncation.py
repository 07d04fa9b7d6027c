"""
Certified summation of Dobinski-type series.

Every series summed here has terms whose absolute ratio |t_{k+1}/t_k| is
nonincreasing once the terms are nonzero and tends to a known limit ρ < 1
(for the Bell family ρ = |λx|, for moments ρ = |λ|α). After the partial sum
through index K, if the observed ratio r_K is at most r* = (1 + ρ)/2 and the
ratio sequence has not increased since it became defined, the tail is at
most |t_{K+1}| / (1 - r*).
"""

import logging
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from app.core.exceptions import BudgetExhausted
from app.core.interval import Interval
from app.schemas import TruncationBudget

logger = logging.getLogger(__name__)


def certified_sum(
    terms: Iterable[Fraction],
    limit_ratio: Fraction,
    budget: TruncationBudget,
    nonnegative: bool = False,
    scale: Fraction = Fraction(1),
) -> Interval:
    """
    Sum an infinite series to a certified interval.

    Args:
        terms: iterator over t_0, t_1, ... (must be infinite or end with zeros)
        limit_ratio: ρ, the limit of |t_{k+1}/t_k|; must be < 1
        budget: term budget and absolute tail target (applied after scaling)
        nonnegative: all terms are >= 0, so the tail is one-sided
        scale: exact positive factor applied to the whole sum

    Raises:
        BudgetExhausted: the tail bound did not reach the target within max_terms
    """
    if not 0 <= limit_ratio < 1:
        raise ValueError(f"limit ratio must lie in [0, 1), got {limit_ratio}")
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    r_star = (1 + limit_ratio) / 2
    target = budget.tail_bound_target / scale

    iterator: Iterator[Fraction] = iter(terms)
    current = next(iterator, None)
    partial = Fraction(0)
    previous_ratio: Optional[Fraction] = None
    monotone_run = 0

    for index in range(budget.max_terms):
        if current is None:
            # Series terminated: the sum is exact
            return Interval(partial * scale, partial * scale)
        partial += current
        following = next(iterator, None)
        if following is None:
            return Interval(partial * scale, partial * scale)

        if current != 0 and following != 0:
            ratio = abs(following / current)
            if previous_ratio is not None and ratio <= previous_ratio:
                monotone_run += 1
            elif previous_ratio is not None:
                monotone_run = 0
            previous_ratio = ratio
            if monotone_run >= 1 and ratio <= r_star:
                bound = abs(following) / (1 - r_star)
                if bound <= target:
                    logger.debug(f"Certified after {index + 1} terms, tail <= {float(bound):.3e}")
                    lo = partial if nonnegative else partial - bound
                    return Interval(lo * scale, (partial + bound) * scale)
        current = following

    raise BudgetExhausted(
        f"tail bound {float(budget.tail_bound_target):.3e} not reached within {budget.max_terms} terms"
    )
