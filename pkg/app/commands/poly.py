import logging

import click

from app.commands import RATIONAL, budget_options, build_budget, output_options
from app.schemas import CliConfig, EvalPoint
from app.services.bell_service import (
    bell_deg,
    bell_deg_closed_form,
    dimorphic_bell,
    fully_degen_bell,
    lah_bell,
    lah_bell_deg,
    lah_bell_zt,
)
from app.services.export_service import ExportService

logger = logging.getLogger(__name__)

# Families evaluated through a Dobinski series at an EvalPoint
DOBINSKI_FAMILIES = {
    "bell-deg": bell_deg,
    "dimorphic-bell": dimorphic_bell,
    "lah-bell-deg": lah_bell_deg,
    "lah-bell-zt": lah_bell_zt,
}
FAMILIES = list(DOBINSKI_FAMILIES) + ["fully-degen-bell", "bell-closed-form", "lah-bell"]


@click.command("poly")
@click.option('--family', type=click.Choice(FAMILIES), required=True, help="Polynomial family")
@click.option('--lambda', 'lam', type=RATIONAL, default=None, help="Degeneracy parameter (not used by lah-bell)")
@click.option('--x', type=RATIONAL, required=True, help="Argument")
@click.option('--n', type=click.IntRange(min=0), required=True, help="Degree")
@budget_options
@output_options(["text", "csv", "json"], "text")
def poly(family, lam, x, n, max_terms, tail_bound, format_, output, show_float):
    """Evaluate one Bell-family polynomial exactly (or as a certified interval)"""
    config = CliConfig(command="poly", lam=lam, x=x, n=n, format=format_, output=output, show_float=show_float)
    if family != "lah-bell" and config.lam is None:
        raise click.UsageError(f"--lambda is required for --family {family}")

    if family in DOBINSKI_FAMILIES:
        point = EvalPoint(x=config.x, lam=config.lam)
        logger.info(f"Evaluating {family} n={n} at x={point.x}, λ={point.lam} ({point.regime.value})")
        value = DOBINSKI_FAMILIES[family](config.n, point, build_budget(max_terms, tail_bound))
    elif family == "fully-degen-bell":
        value = fully_degen_bell(config.n, config.x, config.lam)
    elif family == "bell-closed-form":
        value = bell_deg_closed_form(config.n, config.x, config.lam)
    else:
        value = lah_bell(config.n, config.x)

    lam_shown = None if family == "lah-bell" else config.lam
    ExportService.write(
        ExportService.poly_value(family, config.n, lam_shown, config.x, value, config.format, config.show_float),
        config.output,
    )
