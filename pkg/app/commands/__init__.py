"""
Shared pieces of the command modules: the rational parameter type and the
option groups several commands repeat.
"""

from typing import Optional

import click

from app.core.config import settings
from app.core.exceptions import RationalFormatError
from app.core.rational_io import parse_rational
from app.schemas import TruncationBudget


class RationalType(click.ParamType):
    """Command-line rational: "p" or "p/q", never a float"""
    name = "rational"

    def convert(self, value, param, ctx):
        if not isinstance(value, str):
            return value
        try:
            return parse_rational(value)
        except RationalFormatError as e:
            self.fail(str(e), param, ctx)


RATIONAL = RationalType()


def output_options(formats, default):
    """--format, --output and --float"""
    def decorator(f):
        f = click.option('--float', 'show_float', is_flag=True, help="Append a decimal rendering")(f)
        f = click.option('--output', '-o', type=click.Path(dir_okay=False), default=None,
                         help="Write to this file instead of standard output")(f)
        f = click.option('--format', 'format_', type=click.Choice(formats), default=default, show_default=True)(f)
        return f
    return decorator


def budget_options(f):
    """--max-terms and --tail-bound for certified truncation"""
    f = click.option('--tail-bound', type=RATIONAL, default=None,
                     help="Absolute certified tail target, e.g. 1/1000000")(f)
    f = click.option('--max-terms', type=click.IntRange(min=1), default=None,
                     help=f"Series term budget [default: {settings.DEFAULT_MAX_TERMS}]")(f)
    return f


def build_budget(max_terms: Optional[int], tail_bound) -> TruncationBudget:
    return TruncationBudget(
        max_terms=max_terms if max_terms is not None else settings.DEFAULT_MAX_TERMS,
        tail_bound_target=tail_bound if tail_bound is not None else settings.default_tail_bound,
    )
