import logging

import click

from app.commands import RATIONAL, output_options
from app.schemas import CliConfig, TriangleKind
from app.services.export_service import ExportService
from app.services.triangle_service import TriangleService

logger = logging.getLogger(__name__)

KINDS = {
    "stirling1-deg": (TriangleKind.STIRLING1_DEG, False),
    "stirling2-deg": (TriangleKind.STIRLING2_DEG, False),
    "stirling1": (TriangleKind.STIRLING1_CLASSICAL, False),
    "stirling1-unsigned": (TriangleKind.STIRLING1_CLASSICAL, True),
    "lah": (TriangleKind.LAH, False),
}


@click.command("table")
@click.option('--kind', type=click.Choice(list(KINDS)), required=True, help="Triangle to emit")
@click.option('--lambda', 'lam', type=RATIONAL, default="0", show_default=True,
              help="Degeneracy parameter (ignored by stirling1 and lah)")
@click.option('--n-max', type=click.IntRange(min=0), required=True, help="Last row")
@output_options(["csv", "json"], "csv")
def table(kind, lam, n_max, format_, output, show_float):
    """Emit rows 0..n-max of a number triangle as n,k,value"""
    config = CliConfig(command="table", lam=lam, n_max=n_max, format=format_, output=output, show_float=show_float)
    triangle_kind, unsigned = KINDS[kind]
    logger.info(f"Emitting {kind} triangle to row {n_max} (λ={config.lam})")
    rows = TriangleService.rows(triangle_kind, config.lam, config.n_max, unsigned=unsigned)
    if config.format == "json":
        content = TriangleService.to_json(kind, config.lam, rows) + "\n"
    else:
        content = TriangleService.to_csv(rows, show_float=config.show_float)
    ExportService.write(content, config.output)
