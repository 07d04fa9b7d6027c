"""
Degenerate Poisson and zero-truncated degenerate Poisson laws.

pmf and cdf values are exact rationals. Sampling is inverse-CDF with 53-bit
dyadic uniforms, so every comparison against a prefix sum is an exact
integer comparison.
"""

import logging
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

from app.core.exceptions import DomainError, SamplerOverflow
from app.core.interval import ExactOrInterval
from app.schemas import PoissonParams, SampleBatch, TruncationBudget
from app.services.truncation import certified_sum

logger = logging.getLogger(__name__)

# Uniforms are u = (2b + 1) / 2^54 with b uniform on [0, 2^53)
UNIFORM_BITS = 53
_SCALE = 2 ** (UNIFORM_BITS + 1)

# Generator stream: one index, or a path such as (job, n)
Stream = Union[int, Tuple[int, ...]]


def classify_params(lam: Union[Fraction, int, str], alpha: Union[Fraction, int, str]) -> PoissonParams:
    """
    Validate (λ, α) and pick the support regime.

    Raises:
        UnsupportedRegime: no exact probability law for these parameters
        NonPositiveAlpha: α <= 0
    """
    return PoissonParams(lam=lam, alpha=alpha)


def _weights(p: PoissonParams, start: int = 0) -> Iterator[Fraction]:
    """α^i (1)_{i,λ} / i! for i = start, start+1, ..."""
    weight = Fraction(1)
    i = 0
    while True:
        if i >= start:
            yield weight
        weight = weight * p.alpha * (1 - i * p.lam) / (i + 1)
        i += 1


def _zt_normalizer(p: PoissonParams) -> Fraction:
    return p.normalizer - 1


def pmf_deg(i: int, p: PoissonParams) -> Fraction:
    """P(X = i) = e_λ^{-1}(α) α^i (1)_{i,λ} / i!"""
    if i < 0:
        raise DomainError(f"support index must be nonnegative, got {i}")
    return next(_weights(p, i)) / p.normalizer


def pmf_zt(k: int, p: PoissonParams) -> Fraction:
    """P(X = k | X >= 1) = α^k (1)_{k,λ} / (k! (e_λ(α) - 1))"""
    if k < 1:
        raise DomainError(f"zero-truncated support starts at 1, got k={k}")
    return next(_weights(p, k)) / _zt_normalizer(p)


def pmf_values(p: PoissonParams, truncated: bool = False) -> Iterator[Tuple[int, Fraction]]:
    """(i, pmf(i)) over the support, lazily; infinite for InfiniteSupport"""
    start = 1 if truncated else 0
    denominator = _zt_normalizer(p) if truncated else p.normalizer
    for i, weight in enumerate(_weights(p, start), start=start):
        if p.is_finite and i > p.support_max:
            return
        yield i, weight / denominator


def cdf(i: int, p: PoissonParams, truncated: bool = False) -> Fraction:
    """Exact prefix sum of the pmf through index i"""
    if truncated and i < 1:
        raise DomainError(f"zero-truncated cdf needs i >= 1, got {i}")
    if i < 0:
        raise DomainError(f"cdf index must be nonnegative, got {i}")
    total = Fraction(0)
    for index, value in pmf_values(p, truncated):
        if index > i:
            break
        total += value
    return total


def pmf_table(upto: int, p: PoissonParams, truncated: bool = False) -> List[Tuple[int, Fraction, Fraction]]:
    """Rows (i, pmf, cdf) for i from the support start through upto; zeros past a finite support"""
    start = 1 if truncated else 0
    denominator = _zt_normalizer(p) if truncated else p.normalizer
    rows = []
    running = Fraction(0)
    for i, weight in enumerate(_weights(p, start), start=start):
        if i > upto:
            break
        value = weight / denominator
        running += value
        rows.append((i, value, running))
    return rows


def tail_mass(
    i: int,
    p: PoissonParams,
    truncated: bool = False,
    budget: Optional[TruncationBudget] = None,
) -> ExactOrInterval:
    """1 - cdf(i): exact on a finite support, a certified interval otherwise"""
    if p.is_finite:
        return 1 - cdf(i, p, truncated)
    if budget is None:
        from app.core.config import settings

        budget = settings.default_budget()
    denominator = _zt_normalizer(p) if truncated else p.normalizer
    terms = (weight / denominator for weight in _weights(p, i + 1))
    return certified_sum(terms, limit_ratio=p.limit_ratio, budget=budget, nonnegative=True)


def uniform_keys(seed: int, count: int, stream: Stream = 0) -> np.ndarray:
    """
    Odd integers v in (0, 2^54); the uniform variate is v / 2^54.

    The generator is Philox seeded from SeedSequence(seed, spawn_key=stream).
    A tuple stream such as (job, n) names one child of the seed, so distinct
    streams never share a key and each is reproducible on its own.
    """
    spawn_key = stream if isinstance(stream, tuple) else (stream,)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=spawn_key)))
    bits = rng.integers(0, 2 ** UNIFORM_BITS, size=count, dtype=np.uint64)
    return bits * np.uint64(2) + np.uint64(1)


def draw_array(
    p: PoissonParams,
    seed: int,
    count: int,
    truncated: bool = False,
    stream: Stream = 0,
    max_support: Optional[int] = None,
) -> np.ndarray:
    """
    Inverse-CDF draws: the least i with cdf(i) >= u for each uniform u.

    cdf(i) >= v / 2^54 holds exactly when floor(cdf(i) 2^54) >= v because v
    is an integer, so the search runs on integer thresholds.

    Raises:
        SamplerOverflow: the thresholds needed more than max_support points
    """
    if max_support is None:
        from app.core.config import settings

        max_support = settings.SAMPLER_MAX_SUPPORT
    keys = uniform_keys(seed, count, stream)
    largest = int(keys.max())

    start = 1 if truncated else 0
    thresholds: List[int] = []
    running = Fraction(0)
    for _, value in pmf_values(p, truncated):
        running += value
        level = running.numerator * _SCALE // running.denominator
        thresholds.append(level)
        if level >= largest:
            break
        if len(thresholds) >= max_support:
            raise SamplerOverflow(
                f"inverse-CDF search exceeded {max_support} support points (λ={p.lam}, α={p.alpha})"
            )
    logger.debug(f"Sampler used {len(thresholds)} support points for {count} draws")

    indices = np.searchsorted(np.array(thresholds, dtype=np.uint64), keys, side="left")
    return indices.astype(np.int64) + start


def sample(
    p: PoissonParams,
    seed: int,
    count: int,
    truncated: bool = False,
    stream: int = 0,
    max_support: Optional[int] = None,
) -> SampleBatch:
    """Seeded batch of draws; identical arguments give identical draws"""
    draws = draw_array(p, seed, count, truncated, stream, max_support)
    return SampleBatch(
        seed=seed,
        count=count,
        stream=stream,
        truncated=truncated,
        params=p,
        draws=draws.tolist(),
    )
