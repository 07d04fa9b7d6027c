import logging

import click

from app.commands import RATIONAL, budget_options, build_budget
from app.core.config import settings
from app.core.grid_resolver import load_grid
from app.schemas import CliConfig, ParameterGrid
from app.services.distribution_service import classify_params
from app.services.export_service import ExportService
from app.workers.verify_worker import run_suite

logger = logging.getLogger(__name__)

SUITE_GRIDS = {
    "exact-default": "@grids/exact-default.yaml",
    "mc": "@grids/mc.yaml",
}


def _resolve_grid(suite: str, lam, alpha, grid_file) -> ParameterGrid:
    """Explicit --lambda/--alpha wins, then --grid-file, then the suite's bundled grid"""
    if (lam is None) != (alpha is None):
        raise click.UsageError("--lambda and --alpha must be given together")
    if lam is not None:
        return ParameterGrid(name=suite, points=[classify_params(lam, alpha)])
    if grid_file is not None:
        return load_grid(grid_file)
    if suite in SUITE_GRIDS:
        return load_grid(SUITE_GRIDS[suite])
    raise click.UsageError("the custom suite needs --lambda/--alpha or --grid-file")


@click.command("verify")
@click.option('--suite', type=click.Choice(["exact-default", "mc", "custom"]), default="custom", show_default=True)
@click.option('--lambda', 'lam', type=RATIONAL, default=None, help="Single grid point λ")
@click.option('--alpha', type=RATIONAL, default=None, help="Single grid point α")
@click.option('--grid-file', default=None, help="YAML/JSON grid or @grids/<file> reference")
@click.option('--identity', 'identities', multiple=True, help="Restrict to these identity ids")
@click.option('--n-max', type=click.IntRange(min=0), default=None, help="Largest order checked")
@click.option('--seed', type=click.IntRange(min=0, max=2 ** 64 - 1), default=settings.DEFAULT_SEED, show_default=True)
@click.option('--count', type=click.IntRange(min=2), default=None,
              help=f"Monte Carlo draws per check [default: {settings.DEFAULT_MC_COUNT}]")
@click.option('--sigma', type=click.IntRange(min=1), default=settings.MC_SIGMA_BAND, show_default=True,
              help="Monte Carlo band half-width in standard errors")
@click.option('--workers', type=click.IntRange(min=1), default=settings.WORKER_CONCURRENCY, show_default=True)
@budget_options
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None)
@click.pass_context
def verify(ctx, suite, lam, alpha, grid_file, identities, n_max, seed, count, sigma, workers,
           max_terms, tail_bound, output):
    """Run the identity suite; exit 1 when any check fails"""
    monte_carlo = suite == "mc"
    grid = _resolve_grid(suite, lam, alpha, grid_file)
    if n_max is None:
        n_max = grid.n_max if grid.n_max is not None else (
            settings.MC_N_MAX if monte_carlo else settings.SUITE_N_MAX
        )
    config = CliConfig(command="verify", n_max=n_max, seed=seed, count=count or settings.DEFAULT_MC_COUNT,
                       format="json", output=output)

    report = run_suite(
        grid.points,
        config.n_max,
        budget=build_budget(max_terms, tail_bound),
        seed=config.seed,
        suite=suite,
        monte_carlo=monte_carlo,
        mc_count=config.count,
        sigma_band=sigma,
        concurrency=workers,
        identities=list(identities) or None,
    )
    ExportService.write(ExportService.suite_report(report), config.output)
    if report.summary.failed:
        click.echo(f"{report.summary.failed} of {report.summary.total} checks failed", err=True)
        ctx.exit(1)
