# selmer/randsim.py
"""Rank distributions of random undirected graphs and symmetric F2 matrices.

Sampling is chunked: the master seed is split with ``SeedSequence.spawn``
into one child per fixed-size chunk, so the tallies do not depend on how
chunks are spread over worker processes.
"""
import logging
import math
from enum import Enum
from fractions import Fraction
from multiprocessing import Pool
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from census import q_ke
from exceptions import DomainError, UsageError
from f2linalg import (
    MAX_BATCH_COLS,
    batch_rank,
    enumerate_bits,
    random_symmetric_batch,
    rowsum_mask,
    symmetric_rows,
)

logger = logging.getLogger(__name__)

CHUNK_TRIALS = 1 << 16
ENUMERATION_CHUNK = 1 << 18
EXACT_MAX_K = 6
EXACT_MAX_FREE_BITS = 30


class Mode(str, Enum):
    EXACT = "EXACT"
    MONTE_CARLO = "MONTE_CARLO"


class RankDistribution(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    counts: dict[int, int]
    total: int
    mode: Mode
    seed: Optional[int] = None

    @model_validator(mode="after")
    def check_tally(self):
        if sum(self.counts.values()) != self.total:
            raise ValueError("counts must sum to total")
        if any(not 0 <= e < self.k for e in self.counts):
            raise ValueError(f"exponents must lie in 0..{self.k - 1}")
        return self

    @property
    def frequencies(self) -> dict[int, float]:
        return {e: count / self.total for e, count in sorted(self.counts.items())}

    @property
    def exact_frequencies(self) -> dict[int, Fraction]:
        return {e: Fraction(count, self.total) for e, count in sorted(self.counts.items())}

    def theory(self) -> dict[int, Fraction]:
        return {e: q_ke(self.k, e) for e in range(self.k)}

    def z_scores(self) -> dict[int, Optional[float]]:
        out = {}
        for e, target in self.theory().items():
            p = float(target)
            if not 0 < p < 1:
                out[e] = None
                continue
            observed = self.counts.get(e, 0) / self.total
            out[e] = (observed - p) / math.sqrt(p * (1 - p) / self.total)
        return out

    def to_document(self) -> dict:
        theory = self.theory()
        return {
            "k": self.k,
            "mode": self.mode.value,
            "seed": self.seed,
            "total": self.total,
            "counts": {str(e): self.counts.get(e, 0) for e in range(self.k)},
            "frequencies": {str(e): self.counts.get(e, 0) / self.total for e in range(self.k)},
            "theory": {str(e): str(value) for e, value in theory.items()},
            "z_scores": {str(e): z for e, z in self.z_scores().items()},
        }


class FullRankEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    j: int
    full_rank: int
    total: int
    mode: Mode
    seed: Optional[int] = None

    @property
    def probability(self) -> Fraction:
        return Fraction(self.full_rank, self.total)

    @property
    def theory_applies(self) -> bool:
        # exact for odd j, and for every j when k is odd
        return self.j % 2 == 1 or self.k % 2 == 1

    def matches_theory(self) -> Optional[bool]:
        if self.mode != Mode.EXACT:
            return None
        return self.probability == q_ke(self.k, 0)

    def to_document(self) -> dict:
        document = {
            "k": self.k,
            "rowsum_weight": self.j,
            "mode": self.mode.value,
            "seed": self.seed,
            "full_rank": self.full_rank,
            "total": self.total,
            "probability": str(self.probability) if self.mode == Mode.EXACT else float(self.probability),
            "theory": str(q_ke(self.k, 0)),
            "matches_theory": self.matches_theory(),
            "notes": [],
        }
        if not self.theory_applies:
            document["notes"].append(
                f"even row-sum weight j={self.j} with even k: the full-rank share differs from q(k,0)"
            )
        return document


def _exponent_counts(ranks: np.ndarray, k: int) -> np.ndarray:
    # Laplace rank r leaves 2^(k - r) even partitions
    return np.bincount(k - ranks - 1, minlength=k)[:k]


def _to_counts(tally: np.ndarray) -> dict[int, int]:
    return {e: int(count) for e, count in enumerate(tally)}


def enumerate_rank_distribution(k: int) -> RankDistribution:
    if not 1 <= k <= EXACT_MAX_K:
        raise UsageError(f"exhaustive enumeration supports 1 <= k <= {EXACT_MAX_K}, got {k}")
    width = math.comb(k, 2)
    rows = symmetric_rows(enumerate_bits(width, 0, 2 ** width), k)
    tally = _exponent_counts(batch_rank(rows, k), k)
    return RankDistribution(k=k, counts=_to_counts(tally), total=2 ** width, mode=Mode.EXACT)


def _sample_chunk(task: tuple[int, int, np.random.SeedSequence]) -> np.ndarray:
    k, size, seed_seq = task
    rng = np.random.default_rng(seed_seq)
    rows = random_symmetric_batch(k, size, rng)
    return _exponent_counts(batch_rank(rows, k), k)


def _chunk_sizes(trials: int, chunk: int = CHUNK_TRIALS) -> list[int]:
    full, rest = divmod(trials, chunk)
    return [chunk] * full + ([rest] if rest else [])


def montecarlo_rank_distribution(k: int, trials: int, seed: int, threads: int = 1) -> RankDistribution:
    if not 1 <= k <= MAX_BATCH_COLS:
        raise UsageError(f"sampling supports 1 <= k <= {MAX_BATCH_COLS}, got {k}")
    if trials < 1:
        raise UsageError(f"trials must be at least 1, got {trials}")
    sizes = _chunk_sizes(trials)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    tasks = [(k, size, child) for size, child in zip(sizes, children)]
    logger.info("sampling %d graphs on %d vertices in %d chunks", trials, k, len(tasks))
    if threads > 1 and len(tasks) > 1:
        with Pool(processes=threads) as pool:
            tallies = pool.map(_sample_chunk, tasks)
    else:
        tallies = [_sample_chunk(task) for task in tasks]
    tally = np.sum(tallies, axis=0)
    return RankDistribution(k=k, counts=_to_counts(tally), total=trials, mode=Mode.MONTE_CARLO, seed=seed)


def _count_full_rank(rows: np.ndarray, k: int) -> int:
    return int((batch_rank(rows, k) == k).sum())


def _enumerate_full_rank(task: tuple[int, int, int, int]) -> int:
    k, rowsum, start, stop = task
    return _count_full_rank(symmetric_rows(enumerate_bits(math.comb(k, 2), start, stop), k, rowsum), k)


def _sample_full_rank(task: tuple[int, int, int, np.random.SeedSequence]) -> int:
    k, rowsum, size, seed_seq = task
    rng = np.random.default_rng(seed_seq)
    return _count_full_rank(random_symmetric_batch(k, size, rng, rowsum), k)


def conditioned_fullrank_probability(
    k: int,
    j: int,
    trials: Optional[int] = None,
    seed: int = 0,
    threads: int = 1,
) -> FullRankEstimate:
    """Full-rank share of symmetric k x k matrices with row sums (0, ..., 0, 1 x j); trials=None enumerates."""
    if not 1 <= k <= MAX_BATCH_COLS:
        raise UsageError(f"matrix size k={k} out of range 1..{MAX_BATCH_COLS}")
    if not 1 <= j <= k:
        raise DomainError(f"row-sum weight j={j} out of range 1..{k}")
    rowsum = rowsum_mask(k, j)
    width = math.comb(k, 2)
    if trials is None:
        if width > EXACT_MAX_FREE_BITS:
            raise UsageError(f"exact mode needs C(k,2) <= {EXACT_MAX_FREE_BITS}, k={k} has {width}")
        total = 2 ** width
        tasks = [(k, rowsum, lo, min(lo + ENUMERATION_CHUNK, total)) for lo in range(0, total, ENUMERATION_CHUNK)]
        worker, mode, seed = _enumerate_full_rank, Mode.EXACT, None
    else:
        if trials < 1:
            raise UsageError(f"trials must be at least 1, got {trials}")
        total = trials
        sizes = _chunk_sizes(trials)
        children = np.random.SeedSequence(seed).spawn(len(sizes))
        tasks = [(k, rowsum, size, child) for size, child in zip(sizes, children)]
        worker, mode = _sample_full_rank, Mode.MONTE_CARLO
    if threads > 1 and len(tasks) > 1:
        with Pool(processes=threads) as pool:
            hits = pool.map(worker, tasks)
    else:
        hits = [worker(task) for task in tasks]
    return FullRankEstimate(k=k, j=j, full_rank=sum(hits), total=total, mode=mode, seed=seed)
