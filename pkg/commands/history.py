# selmer/commands/history.py
from typing import Optional

import click

from dependencies import CliConfig, open_session
from output import render_table
from records import RUN_KINDS, list_runs
from models import AnalysisRecord, CensusRecord


def _summary(record) -> str:
    if isinstance(record, AnalysisRecord):
        return f"n={record.n} {record.family or '-'} {record.verdict or '-'} bound={record.rank_upper_bound}"
    if isinstance(record, CensusRecord):
        return f"{record.statistic} X={record.limit} k={record.k} class={record.class_mod8} N={record.denominator}"
    return f"{record.kind} k={record.k} {record.mode} trials={record.trials} seed={record.seed}"


def _kind(record) -> str:
    return next(name for name, table in RUN_KINDS.items() if isinstance(record, table))


@click.command("history")
@click.option("--kind", type=click.Choice(sorted(RUN_KINDS)), default=None)
@click.option("--count", type=click.IntRange(min=1), default=20, show_default=True)
@click.pass_obj
def command(config: CliConfig, kind: Optional[str], count: int):
    """List recorded runs, newest first."""
    runs = []
    for session in open_session(config):
        runs = list_runs(session, kind=kind, limit=count)
    rows = [[record.id, _kind(record), record.created_at.isoformat(timespec="seconds"), _summary(record)] for record in runs]
    click.echo(render_table(["id", "kind", "created_at", "summary"], rows))
