# selmer/commands/census.py
from pathlib import Path
from typing import Optional

import click

from census import (
    CensusSpec,
    ResidueFilter,
    Statistic,
    pik_census,
    run_census,
    selmer_distribution_spec,
    symbol_independence_census,
)
from dependencies import CliConfig, get_sieve, open_session
from exceptions import UsageError
from output import emit
from records import save_census


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _threads(config: CliConfig, threads: Optional[int]) -> int:
    return config.threads if threads is None else threads


def _finish(config: CliConfig, report, out: Optional[Path]) -> None:
    if config.record:
        for session in open_session(config):
            save_census(session, report)
    emit(report.to_document(with_timing=config.timing), config.output_format, out)


def x_option(f):
    return click.option("--x", "x", type=click.IntRange(min=2), required=True, help="Upper end X of the range.")(f)


def common_options(f):
    f = click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
                     help="Write the report to a file instead of stdout.")(f)
    f = click.option("--threads", type=click.IntRange(min=1), default=None, help="Overrides the global --threads.")(f)
    return x_option(f)


@click.group("census")
def group():
    """Sieved censuses compared against their predicted densities."""


@group.command("selmer")
@common_options
@click.option("--k", type=click.IntRange(min=1), required=True, help="omega(n), counting the prime 2.")
@click.option("--class", "class_mod8", type=click.Choice(["2", "3"]), default="3", show_default=True)
@click.pass_obj
def selmer_command(config: CliConfig, x: int, k: int, class_mod8: str, threads: Optional[int], out: Optional[Path]):
    """Share of n with both Selmer groups trivial."""
    spec = CensusSpec(limit=x, k=k, class_mod8=int(class_mod8), statistic=Statistic.SELMER_TRIVIAL,
                      threads=_threads(config, threads), seed=config.seed)
    _finish(config, run_census(spec, get_sieve(config, need=x)), out)


@group.command("pik")
@common_options
@click.option("--mod", "m", type=click.IntRange(min=2), required=True)
@click.option("--counts", required=True, help="Factor counts per reduced residue, e.g. 1,1.")
@click.option("--reference", default=None, help="Second pattern to report the observed ratio against, e.g. 2,0.")
@click.pass_obj
def pik_command(
    config: CliConfig,
    x: int,
    m: int,
    counts: str,
    reference: Optional[str],
    threads: Optional[int],
    out: Optional[Path],
):
    """Squarefree n with prescribed numbers of prime factors in each residue class."""
    report = pik_census(
        x,
        m,
        _int_list(counts),
        get_sieve(config, need=x),
        threads=_threads(config, threads),
        reference=_int_list(reference) if reference else None,
    )
    _finish(config, report, out)


@group.command("symbols")
@common_options
@click.option("--k", type=click.IntRange(min=1), required=True)
@click.option("--delta", required=True, help="Residues mod 8 of the ascending primes, e.g. 1,1.")
@click.pass_obj
def symbols_command(config: CliConfig, x: int, k: int, delta: str, threads: Optional[int], out: Optional[Path]):
    """Legendre-symbol sign patterns among the prime factors."""
    report = symbol_independence_census(x, k, _int_list(delta), get_sieve(config, need=x),
                                        threads=_threads(config, threads))
    _finish(config, report, out)


@group.command("bsd")
@common_options
@click.option("--k", type=click.IntRange(min=1), required=True)
@click.option("--class", "class_mod8", type=click.Choice(["1", "2", "3"]), default="3", show_default=True)
@click.pass_obj
def bsd_command(config: CliConfig, x: int, k: int, class_mod8: str, threads: Optional[int], out: Optional[Path]):
    """Members of B3, B2 or D1 and the share verified."""
    spec = CensusSpec(limit=x, k=k, class_mod8=int(class_mod8), statistic=Statistic.BSD_VERIFIED,
                      threads=_threads(config, threads), seed=config.seed)
    _finish(config, run_census(spec, get_sieve(config, need=x)), out)


@group.command("distribution")
@common_options
@click.option("--k", type=click.IntRange(min=1), required=True)
@click.option("--family", type=click.Choice(["R", "K"]), default="R", show_default=True)
@click.pass_obj
def distribution_command(config: CliConfig, x: int, k: int, family: str, threads: Optional[int], out: Optional[Path]):
    """Selmer exponents over n = 5 mod 8 (R) or primes = 1 mod 8 (K)."""
    spec = selmer_distribution_spec(x, k, family, threads=_threads(config, threads))
    _finish(config, run_census(spec, get_sieve(config, need=x)), out)


@group.command("graphs")
@common_options
@click.option("--k", type=click.IntRange(min=1), required=True)
@click.option("--class", "class_mod8", type=click.Choice(["1", "2", "3", "5", "7"]), default=None)
@click.option("--mod", "m", type=click.IntRange(min=2), default=4, show_default=True)
@click.option("--allowed", default=None, help="Allowed residues of the odd primes mod --mod, e.g. 1.")
@click.pass_obj
def graphs_command(
    config: CliConfig,
    x: int,
    k: int,
    class_mod8: Optional[str],
    m: int,
    allowed: Optional[str],
    threads: Optional[int],
    out: Optional[Path],
):
    """Distribution of even-partition counts of G(n) (odd n) or G'(n/2) (even n)."""
    residue_filter = ResidueFilter(modulus=m, allowed=_int_list(allowed)) if allowed else None
    spec = CensusSpec(
        limit=x,
        k=k,
        class_mod8=int(class_mod8) if class_mod8 else None,
        factor_residue_filter=residue_filter,
        statistic=Statistic.GRAPH_ODD_DISTRIBUTION,
        threads=_threads(config, threads),
        seed=config.seed,
    )
    _finish(config, run_census(spec, get_sieve(config, need=x)), out)
