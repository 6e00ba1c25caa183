# selmer/commands/analyze.py
import click

from dependencies import CliConfig, OutputFormat, get_sieve, open_session
from output import emit
from records import save_analysis
from selmer import analyze


@click.command("analyze")
@click.argument("n", type=click.IntRange(min=2))
@click.option("--json", "as_json", is_flag=True, help="Shortcut for --format json.")
@click.pass_obj
def command(config: CliConfig, n: int, as_json: bool):
    """Selmer sizes, family and BSD status of E_n."""
    report = analyze(n, get_sieve(config, need=n))
    if config.record:
        for session in open_session(config):
            save_analysis(session, report)
    emit(report.to_document(), OutputFormat.JSON if as_json else config.output_format)
