import click

from app.commands import RATIONAL
from app.schemas import CliConfig
from app.services.export_service import ExportService
from app.services.power_series import ps_degen_exp, ps_degen_log, series_to_csv


@click.command("series")
@click.option('--kind', type=click.Choice(["degen-exp", "degen-log"]), required=True,
              help="e_λ^x(t) or log_λ(1+t)")
@click.option('--lambda', 'lam', type=RATIONAL, required=True)
@click.option('--x', type=RATIONAL, default="1", show_default=True, help="Exponent x of e_λ^x(t)")
@click.option('--order', type=click.IntRange(min=0), required=True, help="Truncation order")
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None)
def series(kind, lam, x, order, output):
    """Coefficient dump n,coefficient of a degenerate exponential or logarithm"""
    config = CliConfig(command="series", lam=lam, x=x, n=order, output=output)
    if kind == "degen-exp":
        f = ps_degen_exp(config.x, config.lam, config.n)
    else:
        f = ps_degen_log(config.lam, config.n)
    ExportService.write(series_to_csv(f), config.output)
