# selmer/commands/constants.py
import click

from census import c2_derived, c2_printed, c3, d_r, lam, p_full_rank, q, q_ke
from dependencies import CliConfig
from output import emit


@click.command("constants")
@click.option("--k-max", type=click.IntRange(min=1, max=16), default=8, show_default=True)
@click.option("--r-max", type=click.IntRange(min=0, max=64), default=6, show_default=True)
@click.pass_obj
def command(config: CliConfig, k_max: int, r_max: int):
    """Probability and density constants, exact where rational."""
    ks = range(1, k_max + 1)
    document = {
        "lambda": lam(),
        "d_r": {str(r): d_r(r) for r in range(r_max + 1)},
        "q": {str(k): str(q(k)) for k in ks},
        "q_ke": {str(k): {str(e): str(q_ke(k, e)) for e in range(k)} for k in ks},
        "p": {str(k): str(p_full_rank(k)) for k in ks},
        "c3": {str(k): str(c3(k)) for k in ks},
        "c2": {str(k): str(c2_printed(k)) for k in ks if k >= 2},
        "c2_derived": {str(k): str(c2_derived(k)) for k in ks if k >= 2},
    }
    emit(document, config.output_format)
