from fractions import Fraction
import math

import pytest
from pydantic import ValidationError

from census import q_ke
from exceptions import DomainError, UsageError
from randsim import (
    Mode,
    RankDistribution,
    conditioned_fullrank_probability,
    enumerate_rank_distribution,
    montecarlo_rank_distribution,
)


def test_enumeration_small_cases():
    assert enumerate_rank_distribution(1).counts == {0: 1}
    two = enumerate_rank_distribution(2)
    assert two.counts == {0: 1, 1: 1}
    assert two.total == 2
    four = enumerate_rank_distribution(4)
    assert four.counts[0] == 28
    assert four.total == 64
    assert four.mode == Mode.EXACT


@pytest.mark.parametrize("k", range(1, 7))
def test_enumeration_matches_formula(k):
    distribution = enumerate_rank_distribution(k)
    assert distribution.exact_frequencies == {e: q_ke(k, e) for e in range(k)}


def test_enumeration_limit():
    with pytest.raises(UsageError):
        enumerate_rank_distribution(7)


def test_montecarlo_two_vertices():
    distribution = montecarlo_rank_distribution(2, 100_000, seed=1)
    assert distribution.frequencies[0] == pytest.approx(0.5, abs=0.01)
    assert distribution.total == 100_000


def test_montecarlo_is_reproducible():
    first = montecarlo_rank_distribution(6, 50_000, seed=7)
    second = montecarlo_rank_distribution(6, 50_000, seed=7)
    assert first.counts == second.counts
    assert montecarlo_rank_distribution(6, 50_000, seed=8).counts != first.counts


def test_montecarlo_independent_of_threads():
    single = montecarlo_rank_distribution(8, 200_000, seed=3)
    pooled = montecarlo_rank_distribution(8, 200_000, seed=3, threads=3)
    assert single.to_document() == pooled.to_document()


def test_montecarlo_within_five_sigma():
    distribution = montecarlo_rank_distribution(10, 200_000, seed=11)
    for e, z in distribution.z_scores().items():
        if z is not None:
            assert abs(z) < 5, e


@pytest.mark.slow
def test_montecarlo_million_trials_within_five_sigma():
    distribution = montecarlo_rank_distribution(10, 1_000_000, seed=7, threads=4)
    for e, target in distribution.theory().items():
        p = float(target)
        sigma = math.sqrt(p * (1 - p) / distribution.total)
        assert abs(distribution.frequencies[e] - p) <= 5 * sigma + 1e-12


def test_montecarlo_arguments():
    with pytest.raises(UsageError):
        montecarlo_rank_distribution(65, 10, seed=0)
    with pytest.raises(UsageError):
        montecarlo_rank_distribution(4, 0, seed=0)


def test_conditioned_exact_small():
    assert conditioned_fullrank_probability(2, 1).probability == Fraction(1, 2)
    assert conditioned_fullrank_probability(1, 1).probability == 1


@pytest.mark.parametrize(
    "k, expected",
    [
        (2, ["1/2", "1"]),
        (3, ["1/2", "1/2", "1/2"]),
        (4, ["7/16", "1/2", "7/16", "1/2"]),
        (5, ["7/16"] * 5),
    ],
)
def test_conditioned_exact_by_rowsum(k, expected):
    shares = [conditioned_fullrank_probability(k, j) for j in range(1, k + 1)]
    assert [str(share.probability) for share in shares] == expected
    for share in shares:
        assert share.matches_theory() == share.theory_applies


@pytest.mark.parametrize("k", range(2, 6))
def test_conditioned_odd_rowsum_gives_q(k):
    for j in range(1, k + 1, 2):
        assert conditioned_fullrank_probability(k, j).probability == q_ke(k, 0)


def test_conditioned_document_flags_even_rowsum():
    document = conditioned_fullrank_probability(4, 2).to_document()
    assert document["probability"] == "1/2"
    assert document["theory"] == "7/16"
    assert document["matches_theory"] is False
    assert document["notes"]
    odd = conditioned_fullrank_probability(4, 3).to_document()
    assert odd["matches_theory"] is True
    assert odd["notes"] == []


@pytest.mark.parametrize("j", [2, 3])
def test_conditioned_sampling(j):
    estimate = conditioned_fullrank_probability(4, j, trials=100_000, seed=5)
    assert estimate.mode == Mode.MONTE_CARLO
    assert estimate.matches_theory() is None
    p = float(conditioned_fullrank_probability(4, j).probability)
    assert abs(float(estimate.probability) - p) < 5 * math.sqrt(p * (1 - p) / 100_000)


def test_conditioned_errors():
    with pytest.raises(DomainError):
        conditioned_fullrank_probability(3, 0)
    with pytest.raises(DomainError):
        conditioned_fullrank_probability(3, 4)
    with pytest.raises(UsageError):
        conditioned_fullrank_probability(9, 1)


def test_distribution_validates_tally():
    with pytest.raises(ValidationError):
        RankDistribution(k=2, counts={0: 1, 1: 1}, total=3, mode=Mode.EXACT)
    with pytest.raises(ValidationError):
        RankDistribution(k=2, counts={2: 1}, total=1, mode=Mode.EXACT)


def test_distribution_document():
    document = enumerate_rank_distribution(3).to_document()
    assert document["counts"] == {"0": 4, "1": 3, "2": 1}
    assert document["theory"] == {"0": "1/2", "1": "3/8", "2": "1/8"}
