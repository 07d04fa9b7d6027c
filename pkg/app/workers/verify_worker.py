"""
Identity verification runner.

Each identity id compares two independent computational routes for
n = n_start..n_max and records one IdentityCheckResult per n. The suite
runner fans grid points out to a thread pool. A library error at one n
becomes a failed check for that n alone, anything else fails its whole
job. Merged results are sorted, so the report depends only on its inputs.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.core.arith import lambda_falling
from app.core.exceptions import DegenLabError, UnknownIdentity
from app.core.interval import ExactOrInterval, Interval, agrees
from app.core.rational_io import format_value, to_exact
from app.schemas import (
    CheckMethod,
    EvalPoint,
    IdentityCheckResult,
    MomentFamily,
    MomentKind,
    PoissonParams,
    SuiteReport,
    SuiteSummary,
    TruncationBudget,
)
from app.services.bell_service import (
    bell_deg,
    bell_deg_closed_form,
    dimorphic_bell,
    fully_degen_bell,
    fully_degen_bell_oracle,
    lah_bell_deg_oracle,
    lah_bell_zt,
    lah_bell_zt_oracle,
    ordinary_bell_oracle,
    unsigned_stirling_sum,
)
from app.services.distribution_service import classify_params
from app.services.moment_service import moment_closed_form, moment_direct, moment_mc
from app.services.triangle_service import orthogonality_row_deviation, stirling1_deg

logger = logging.getLogger(__name__)

NO_FORMULA_TAG = "no-paper-formula"

Sides = Tuple[ExactOrInterval, ExactOrInterval]


@dataclass(frozen=True)
class IdentityRoute:
    """How one identity is checked at a single n"""
    compute: Callable[[Fraction, Fraction, int, TruncationBudget], Sides]
    n_start: int = 0
    uses_alpha: bool = True
    uses_lambda: bool = True


def _moment_pair(family: MomentFamily, truncated: bool):
    def compute(lam, alpha, n, budget):
        p = classify_params(lam, alpha)
        mk = MomentKind(kind=family, n=n)
        return moment_direct(mk, p, truncated, budget), moment_closed_form(mk, p, truncated)
    return compute


def _bell_values(p: EvalPoint, n: int, budget: TruncationBudget) -> List[ExactOrInterval]:
    return [bell_deg(k, p, budget) for k in range(n + 1)]


def _falling_from_bell(lam, alpha, n, budget, truncated: bool) -> Sides:
    """E[(X)_n] by enumeration vs sum_k Bel_{k,λ}(α) S_{1,λ}(n, k)"""
    p = classify_params(lam, alpha)
    bells = _bell_values(p.as_eval_point(), n, budget)
    first = 1 if truncated else 0
    rhs: ExactOrInterval = Fraction(0)
    for k in range(first, n + 1):
        rhs = rhs + bells[k] * stirling1_deg(n, k, lam)
    if truncated:
        rhs = rhs / (1 - 1 / p.normalizer)
    return moment_direct(MomentKind(kind=MomentFamily.FALLING, n=n), p, truncated, budget), rhs


def _t1(lam, alpha, n, budget) -> Sides:
    """(x)_{n,λ} = sum_k β_{k,λ}(x) S_{1,λ}(n, k)"""
    rhs = sum((fully_degen_bell(k, alpha, lam) * stirling1_deg(n, k, lam) for k in range(n + 1)), Fraction(0))
    return lambda_falling(alpha, n, lam), rhs


def _c2(lam, alpha, n, budget) -> Sides:
    return fully_degen_bell(n, alpha, lam), fully_degen_bell_oracle(n, alpha, lam)


def _t4_particular(lam, alpha, n, budget) -> Sides:
    """(1+λα)^n sum_k Bel_{k,λ}(α) S_{1,λ}(n, k) = α^n (1)_{n,λ}"""
    p = classify_params(lam, alpha)
    bells = _bell_values(p.as_eval_point(), n, budget)
    total: ExactOrInterval = Fraction(0)
    for k in range(n + 1):
        total = total + bells[k] * stirling1_deg(n, k, lam)
    return total * (1 + lam * alpha) ** n, alpha ** n * lambda_falling(1, n, lam)


def _t6(lam, alpha, n, budget) -> Sides:
    """E[<X>_n] by enumeration vs sum_k B_{k,λ}(α)|S_1(n, k)| with Dobinski B"""
    p = classify_params(lam, alpha)
    point = p.as_eval_point()
    rhs = unsigned_stirling_sum(n, [dimorphic_bell(k, point, budget) for k in range(n + 1)])
    return moment_direct(MomentKind(kind=MomentFamily.RISING, n=n), p, False, budget), rhs


def _t6_particular(lam, alpha, n, budget) -> Sides:
    """B^L_{n,λ}(x) from its generating function vs sum_k B_{k,λ}(x)|S_1(n, k)|"""
    point = EvalPoint(x=alpha, lam=lam)
    rhs = unsigned_stirling_sum(n, [dimorphic_bell(k, point, budget) for k in range(n + 1)])
    return lah_bell_deg_oracle(n, alpha, lam), rhs


def _t7(lam, alpha, n, budget) -> Sides:
    """B^{(L,0)}_{n,λ}(x) from its generating function vs B^L_{n,λ}(x)/(1 - e_λ^{-1}(x))"""
    return lah_bell_zt_oracle(n, alpha, lam), lah_bell_zt(n, EvalPoint(x=alpha, lam=lam), budget)


def _e6(lam, alpha, n, budget) -> Sides:
    deviation, _ = orthogonality_row_deviation(n, lam)
    return deviation, Fraction(0)


def _e11(lam, alpha, n, budget) -> Sides:
    """Bel_{n,λ}(x) at λ = 0 vs the ordinary Bell polynomial"""
    return bell_deg_closed_form(n, alpha, 0), ordinary_bell_oracle(n, alpha)


def _e12_gate(lam, alpha, n, budget) -> Sides:
    """Finite S_{2,λ} form of Bel_{n,λ}(x) vs the Dobinski series"""
    return bell_deg_closed_form(n, alpha, lam), bell_deg(n, EvalPoint(x=alpha, lam=lam), budget)


IDENTITIES: Dict[str, IdentityRoute] = {
    "T1": IdentityRoute(_t1),
    "C2": IdentityRoute(_c2),
    "T3": IdentityRoute(lambda lam, alpha, n, budget: _falling_from_bell(lam, alpha, n, budget, truncated=False)),
    "T4": IdentityRoute(_moment_pair(MomentFamily.FALLING, False)),
    "T4-particular": IdentityRoute(_t4_particular),
    "T5": IdentityRoute(_moment_pair(MomentFamily.BINOMIAL, False)),
    "T6": IdentityRoute(_t6),
    "T6-particular": IdentityRoute(_t6_particular),
    "T7": IdentityRoute(_t7),
    "T8": IdentityRoute(_moment_pair(MomentFamily.FALLING, True), n_start=1),
    "T9": IdentityRoute(_moment_pair(MomentFamily.LAMBDA_FALLING, True), n_start=1),
    "T10": IdentityRoute(lambda lam, alpha, n, budget: _falling_from_bell(lam, alpha, n, budget, truncated=True), n_start=1),
    "C8": IdentityRoute(_moment_pair(MomentFamily.BINOMIAL, True), n_start=1),
    "E6": IdentityRoute(_e6, uses_alpha=False),
    "E11": IdentityRoute(_e11, uses_lambda=False),
    "E12": IdentityRoute(_moment_pair(MomentFamily.LAMBDA_FALLING, False)),
    "E12-gate": IdentityRoute(_e12_gate),
    "E26": IdentityRoute(_moment_pair(MomentFamily.POWER, False)),
}

# Moment identities echoed by Monte Carlo: id -> (family, zero-truncated)
MC_ECHOES: Dict[str, Tuple[MomentFamily, bool]] = {
    "T4": (MomentFamily.FALLING, False),
    "T5": (MomentFamily.BINOMIAL, False),
    "T6": (MomentFamily.RISING, False),
    "E12": (MomentFamily.LAMBDA_FALLING, False),
    "E26": (MomentFamily.POWER, False),
    "T8": (MomentFamily.FALLING, True),
    "T9": (MomentFamily.LAMBDA_FALLING, True),
    "C8": (MomentFamily.BINOMIAL, True),
    "ZT-RISING": (MomentFamily.RISING, True),
    "ZT-POWER": (MomentFamily.POWER, True),
}


def _method_for(lhs: ExactOrInterval, rhs: ExactOrInterval) -> CheckMethod:
    if isinstance(lhs, Interval) or isinstance(rhs, Interval):
        return CheckMethod.CERTIFIED_TRUNCATION
    return CheckMethod.EXACT_ENUM


def _error_check(
    identity_id: str,
    lam: Fraction,
    alpha: Fraction,
    n: int,
    method: CheckMethod,
    error: Exception,
) -> IdentityCheckResult:
    return IdentityCheckResult(
        identity_id=identity_id,
        lam=lam,
        alpha=alpha,
        n=n,
        method=method,
        passed=False,
        detail=f"error: {type(error).__name__}: {error}",
    )


def verify_identity(
    identity_id: str,
    lam,
    alpha,
    n_max: int,
    budget: Optional[TruncationBudget] = None,
) -> List[IdentityCheckResult]:
    """
    Check one identity for every n from its first index up to n_max.

    λ-free identities (E11) are recorded with λ = 0 and α-free ones (E6)
    with α = 0.

    A DegenLabError at one n (a regime or budget failure) is recorded as a
    failed check for that n and the remaining orders still run.

    Raises:
        UnknownIdentity: identity_id is not registered
    """
    route = IDENTITIES.get(identity_id)
    if route is None:
        raise UnknownIdentity(f"Unknown identity '{identity_id}'. Known: {', '.join(sorted(IDENTITIES))}")
    if budget is None:
        from app.core.config import settings

        budget = settings.default_budget()
    lam = to_exact(lam) if route.uses_lambda else Fraction(0)
    alpha = to_exact(alpha) if route.uses_alpha else Fraction(0)

    results = []
    for n in range(route.n_start, n_max + 1):
        try:
            lhs, rhs = route.compute(lam, alpha, n, budget)
        except DegenLabError as e:
            logger.error(f"{identity_id} at n={n} (λ={lam}, α={alpha}) raised: {e}")
            results.append(_error_check(identity_id, lam, alpha, n, CheckMethod.EXACT_ENUM, e))
            continue
        passed = agrees(lhs, rhs)
        detail = "" if passed else f"lhs={format_value(lhs)} rhs={format_value(rhs)}"
        if not passed:
            logger.error(f"{identity_id} failed at n={n} (λ={lam}, α={alpha}): {detail}")
        results.append(IdentityCheckResult(
            identity_id=identity_id,
            lam=lam,
            alpha=alpha,
            n=n,
            lhs=lhs,
            rhs=rhs,
            method=_method_for(lhs, rhs),
            passed=passed,
            detail=detail,
        ))
    return results


def verify_identity_mc(
    identity_id: str,
    lam,
    alpha,
    n_max: int,
    seed: int,
    count: int,
    stream: int = 0,
    sigma_band: Optional[int] = None,
    budget: Optional[TruncationBudget] = None,
) -> List[IdentityCheckResult]:
    """
    Monte Carlo echo of a moment identity for n = 1..n_max.

    The estimate's band mean ± sigma_band·stderr must meet the exact (or
    certified) value. Zero-truncated rising and power moments have no
    closed formula; they are compared against direct enumeration instead.
    """
    echo = MC_ECHOES.get(identity_id)
    if echo is None:
        raise UnknownIdentity(f"No Monte Carlo echo for '{identity_id}'. Known: {', '.join(sorted(MC_ECHOES))}")
    from app.core.config import settings

    if sigma_band is None:
        sigma_band = settings.MC_SIGMA_BAND
    if budget is None:
        budget = settings.default_budget()
    family, truncated = echo
    p = classify_params(lam, alpha)

    results = []
    for n in range(1, n_max + 1):
        mk = MomentKind(kind=family, n=n)
        try:
            if identity_id.startswith("ZT-"):
                target = moment_direct(mk, p, truncated, budget)
                detail = NO_FORMULA_TAG
            else:
                target = moment_closed_form(mk, p, truncated)
                detail = ""
            estimate = moment_mc(mk, p, truncated, seed, count, stream=(stream, n))
        except DegenLabError as e:
            logger.error(f"MC {identity_id} at n={n} (λ={p.lam}, α={p.alpha}) raised: {e}")
            results.append(_error_check(identity_id, p.lam, p.alpha, n, CheckMethod.MONTE_CARLO, e))
            continue
        band = estimate.band(sigma_band)
        passed = agrees(band, target)
        if not passed:
            logger.error(
                f"MC {identity_id} n={n} (λ={p.lam}, α={p.alpha}): "
                f"{estimate.mean:.6g} ± {estimate.stderr:.3g} misses {format_value(target)}"
            )
            detail = (detail + " " if detail else "") + f"mean={estimate.mean!r} stderr={estimate.stderr!r}"
        results.append(IdentityCheckResult(
            identity_id=identity_id,
            lam=p.lam,
            alpha=p.alpha,
            n=n,
            lhs=band,
            rhs=target,
            method=CheckMethod.MONTE_CARLO,
            passed=passed,
            detail=detail,
        ))
    return results


@dataclass(frozen=True)
class _Job:
    index: int
    identity_id: str
    lam: Fraction
    alpha: Fraction


def _plan_exact(grid: Sequence[PoissonParams]) -> List[_Job]:
    """Every identity at every grid point; E6 once per λ, E11 once per α"""
    jobs: List[_Job] = []
    lambdas = sorted({p.lam for p in grid})
    alphas = sorted({p.alpha for p in grid})
    for identity_id, route in IDENTITIES.items():
        if not route.uses_alpha:
            points = [(lam, Fraction(0)) for lam in lambdas]
        elif not route.uses_lambda:
            points = [(Fraction(0), alpha) for alpha in alphas]
        else:
            points = [(p.lam, p.alpha) for p in grid]
        for lam, alpha in points:
            jobs.append(_Job(len(jobs), identity_id, lam, alpha))
    return jobs


def _plan_mc(grid: Sequence[PoissonParams]) -> List[_Job]:
    jobs: List[_Job] = []
    for identity_id in MC_ECHOES:
        for p in grid:
            jobs.append(_Job(len(jobs), identity_id, p.lam, p.alpha))
    return jobs


def _failed_job(job: _Job, error: Exception, monte_carlo: bool) -> IdentityCheckResult:
    method = CheckMethod.MONTE_CARLO if monte_carlo else CheckMethod.EXACT_ENUM
    return _error_check(job.identity_id, job.lam, job.alpha, 0, method, error)


def run_suite(
    grid: Sequence[PoissonParams],
    n_max: int,
    budget: Optional[TruncationBudget] = None,
    seed: int = 0,
    suite: str = "custom",
    monte_carlo: bool = False,
    mc_count: Optional[int] = None,
    sigma_band: Optional[int] = None,
    concurrency: Optional[int] = None,
    identities: Optional[Sequence[str]] = None,
) -> SuiteReport:
    """
    Run every applicable identity over a (λ, α) grid.

    Monte Carlo check n of job i draws from SeedSequence(seed, spawn_key=(i, n)),
    so the report does not depend on scheduling. An empty grid gives an
    empty report with the verdict "vacuous pass".
    `identities` restricts the run to those ids.
    """
    from app.core.config import settings

    if budget is None:
        budget = settings.default_budget()
    if concurrency is None:
        concurrency = settings.WORKER_CONCURRENCY
    if mc_count is None:
        mc_count = settings.DEFAULT_MC_COUNT

    jobs = _plan_mc(grid) if monte_carlo else _plan_exact(grid)
    if identities:
        known = MC_ECHOES if monte_carlo else IDENTITIES
        unknown = sorted(set(identities) - set(known))
        if unknown:
            raise UnknownIdentity(f"Unknown identity {', '.join(unknown)}. Known: {', '.join(sorted(known))}")
        jobs = [job for job in jobs if job.identity_id in identities]

    logger.info("=" * 80)
    logger.info(f"Starting verification suite: {suite}")
    logger.info(f"Grid points: {len(grid)}  n_max: {n_max}  seed: {seed}")
    logger.info(f"Jobs: {len(jobs)}  workers: {concurrency}  mode: {'monte-carlo' if monte_carlo else 'exact'}")
    logger.info("=" * 80)

    def run_job(job: _Job) -> List[IdentityCheckResult]:
        try:
            if monte_carlo:
                return verify_identity_mc(
                    job.identity_id, job.lam, job.alpha, n_max,
                    seed=seed, count=mc_count, stream=job.index,
                    sigma_band=sigma_band, budget=budget,
                )
            return verify_identity(job.identity_id, job.lam, job.alpha, n_max, budget)
        except DegenLabError as e:
            logger.error(f"{job.identity_id} at (λ={job.lam}, α={job.alpha}) raised: {e}")
            return [_failed_job(job, e, monte_carlo)]
        except Exception as e:
            logger.error(f"{job.identity_id} at (λ={job.lam}, α={job.alpha}) crashed: {e}", exc_info=True)
            return [_failed_job(job, e, monte_carlo)]

    checks: List[IdentityCheckResult] = []
    if jobs:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            for results in pool.map(run_job, jobs):
                checks.extend(results)
    checks.sort(key=lambda c: c.sort_key())

    failed = [c for c in checks if not c.passed]
    if not checks:
        verdict = "vacuous pass"
    else:
        verdict = "pass" if not failed else "fail"

    logger.info("=" * 80)
    logger.info(f"Suite {suite} finished: {len(checks)} checks, {len(failed)} failed, verdict: {verdict}")
    for check in failed[:10]:
        logger.info(f"  ✗ {check.identity_id} n={check.n} λ={check.lam} α={check.alpha} {check.detail}")
    logger.info("=" * 80)

    return SuiteReport(
        suite=suite,
        seed=seed,
        checks=checks,
        summary=SuiteSummary(total=len(checks), failed=len(failed)),
        verdict=verdict,
    )
