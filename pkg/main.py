# selmer/main.py
import logging
import os
import sys
from pathlib import Path

import click
from pydantic import ValidationError

from commands import analyze, census, constants, history, simulate
from database import DATABASE_URL
from dependencies import CliConfig, OutputFormat
from exceptions import RESOURCE_ERROR, USAGE_ERROR, SelmerException

logger = logging.getLogger("selmer")


class SelmerGroup(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except SelmerException as exc:
            click.echo(f"error: {exc.detail}", err=True)
            ctx.exit(exc.status_code)
        except ValidationError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(USAGE_ERROR)
        except MemoryError:
            click.echo("error: out of memory", err=True)
            ctx.exit(RESOURCE_ERROR)


def _configure_logging(verbose: int) -> None:
    level = os.environ.get("SELMER_LOG_LEVEL", "WARNING").upper()
    if verbose:
        level = "DEBUG" if verbose > 1 else "INFO"
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


@click.group(cls=SelmerGroup)
@click.option("--cache", "cache_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Sieve cache file (default $SELMER_SIEVE_CACHE or ./selmer_sieve.bin).")
@click.option("--no-cache", is_flag=True, help="Keep the sieve in memory only.")
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--limit", type=int, default=None, help="Minimum sieve limit to build.")
@click.option("--format", "output_format", type=click.Choice([f.value for f in OutputFormat], case_sensitive=False),
              default=OutputFormat.TEXT.value, show_default=True)
@click.option("--record", is_flag=True, help="Store the result in the results database.")
@click.option("--db", "database_url", default=DATABASE_URL, show_default=True)
@click.option("--timing", is_flag=True, help="Include runtimes and timestamps in reports.")
@click.option("-v", "--verbose", count=True)
@click.pass_context
def cli(ctx, cache_path, no_cache, threads, seed, limit, output_format, record, database_url, timing, verbose):
    """Selmer ranks, congruent numbers and census checks for y^2 = x^3 - n^2 x."""
    _configure_logging(verbose)
    settings = dict(
        use_cache=not no_cache,
        threads=threads,
        seed=seed,
        output_format=OutputFormat(output_format.upper()),
        database_url=database_url,
        record=record,
        timing=timing,
    )
    if cache_path is not None:
        settings["cache_path"] = cache_path
    if limit is not None:
        settings["limit"] = limit
    ctx.obj = CliConfig(**settings)


cli.add_command(analyze.command)
cli.add_command(census.group)
cli.add_command(simulate.command)
cli.add_command(constants.command)
cli.add_command(history.command)


if __name__ == "__main__":
    cli()
