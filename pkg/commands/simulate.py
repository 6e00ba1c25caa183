# selmer/commands/simulate.py
from typing import Optional

import click

from dependencies import CliConfig, open_session
from output import emit
from randsim import conditioned_fullrank_probability, enumerate_rank_distribution, montecarlo_rank_distribution
from records import save_simulation


@click.command("simulate")
@click.option("--k", type=click.IntRange(min=1), required=True, help="Number of vertices / matrix size.")
@click.option("--trials", type=click.IntRange(min=1), default=100_000, show_default=True)
@click.option("--seed", type=int, default=None, help="Overrides the global --seed.")
@click.option("--exact", is_flag=True, help="Enumerate every graph instead of sampling.")
@click.option("--rowsum", "j", type=int, default=None,
              help="Condition on row sums with the last J coordinates set and report the full-rank share.")
@click.pass_obj
def command(config: CliConfig, k: int, trials: int, seed: Optional[int], exact: bool, j: Optional[int]):
    """Rank distribution of random graphs, exact or by Monte Carlo."""
    seed = config.seed if seed is None else seed
    if j is not None:
        result = conditioned_fullrank_probability(
            k, j, trials=None if exact else trials, seed=seed, threads=config.threads
        )
    elif exact:
        result = enumerate_rank_distribution(k)
    else:
        result = montecarlo_rank_distribution(k, trials, seed, threads=config.threads)
    if config.record:
        for session in open_session(config):
            save_simulation(session, result)
    emit(result.to_document(), config.output_format)
