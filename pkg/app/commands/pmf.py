import logging

import click

from app.commands import RATIONAL, output_options
from app.schemas import CliConfig
from app.services.distribution_service import classify_params, pmf_table
from app.services.export_service import ExportService

logger = logging.getLogger(__name__)


@click.command("pmf")
@click.option('--lambda', 'lam', type=RATIONAL, required=True, help="Degeneracy parameter")
@click.option('--alpha', type=RATIONAL, required=True, help="Poisson parameter α > 0")
@click.option('--upto', type=click.IntRange(min=0), required=True, help="Last support index")
@click.option('--truncated', is_flag=True, help="Zero-truncated law (rows start at i = 1)")
@output_options(["csv", "json"], "csv")
def pmf(lam, alpha, upto, truncated, format_, output, show_float):
    """Exact pmf and cdf table as i,pmf,cdf"""
    config = CliConfig(command="pmf", lam=lam, alpha=alpha, n_max=upto, format=format_, output=output,
                       show_float=show_float)
    params = classify_params(config.lam, config.alpha)
    logger.info(f"pmf table to {upto} for λ={params.lam}, α={params.alpha} ({params.regime.value})")
    rows = pmf_table(upto, params, truncated=truncated)
    ExportService.write(ExportService.pmf_table(rows, config.format, config.show_float), config.output)
