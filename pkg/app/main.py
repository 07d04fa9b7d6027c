import logging
import sys

import click
from pydantic import ValidationError

from app.commands.pmf import pmf
from app.commands.poly import poly
from app.commands.sample import sample
from app.commands.series import series
from app.commands.table import table
from app.commands.verify import verify
from app.core.config import settings
from app.core.exceptions import DegenLabError

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


class DegenLabGroup(click.Group):
    """Maps library and usage errors to exit code 2 with a one-line diagnostic"""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except DegenLabError as e:
            logger.debug("Command failed", exc_info=True)
            click.echo(f"Error: {type(e).__name__}: {e}", err=True)
            ctx.exit(2)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first.get("loc", ()))
            click.echo(f"Error: invalid {location or 'input'}: {first.get('msg')}", err=True)
            ctx.exit(2)
        except click.UsageError as e:
            click.echo(f"Error: {e.format_message()}", err=True)
            ctx.exit(2)


@click.group(cls=DegenLabGroup)
@click.option('--log-level', type=click.Choice(LOG_LEVELS, case_sensitive=False), default=None,
              help=f"Diagnostics on standard error [default: {settings.LOG_LEVEL}]")
@click.version_option("1.0.0", prog_name="degenlab")
def cli(log_level):
    """Exact degenerate Stirling, Bell and Poisson computations with identity verification"""
    # Logs go to stderr so stdout stays byte-identical across runs
    logging.basicConfig(
        level=(log_level or settings.LOG_LEVEL).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )


cli.add_command(table)
cli.add_command(poly)
cli.add_command(pmf)
cli.add_command(sample)
cli.add_command(verify)
cli.add_command(series)


def main():
    cli(prog_name="degenlab")


if __name__ == "__main__":
    main()
