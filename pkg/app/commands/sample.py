import logging

import click

from app.commands import RATIONAL
from app.core.config import settings
from app.schemas import CliConfig
from app.services.distribution_service import classify_params, sample as draw_sample
from app.services.export_service import ExportService

logger = logging.getLogger(__name__)


@click.command("sample")
@click.option('--lambda', 'lam', type=RATIONAL, required=True, help="Degeneracy parameter")
@click.option('--alpha', type=RATIONAL, required=True, help="Poisson parameter α > 0")
@click.option('--count', type=click.IntRange(min=1), default=1, show_default=True, help="Number of draws")
@click.option('--seed', type=click.IntRange(min=0, max=2 ** 64 - 1), default=settings.DEFAULT_SEED,
              show_default=True, help="Generator seed")
@click.option('--stream', type=click.IntRange(min=0), default=0, show_default=True,
              help="Stream index combined with the seed")
@click.option('--truncated', is_flag=True, help="Draw from the zero-truncated law")
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None)
def sample(lam, alpha, count, seed, stream, truncated, output):
    """Seeded inverse-CDF draws, one per line, followed by a JSON footer"""
    config = CliConfig(command="sample", lam=lam, alpha=alpha, seed=seed, count=count, output=output)
    params = classify_params(config.lam, config.alpha)
    batch = draw_sample(params, config.seed, config.count, truncated=truncated, stream=stream,
                        max_support=settings.SAMPLER_MAX_SUPPORT)
    logger.info(f"Drew {batch.count} values (seed={batch.seed}, stream={batch.stream})")
    ExportService.write(ExportService.sample_batch(batch), config.output)
