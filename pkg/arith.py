# selmer/arith.py
import logging
import math
import os
import struct
from typing import NamedTuple, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from exceptions import DomainError, ResourceError, UsageError

logger = logging.getLogger(__name__)

MAX_LIMIT = 2 ** 32
SIEVE_MAGIC = b"SFSV1"
_HEADER = struct.Struct("<Q")


class FactoredInteger(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: int
    factors: tuple[int, ...]  # primes, each with exponent 1
    residues_mod8: tuple[int, ...]
    residue_mod8: int
    is_even: bool

    @model_validator(mode="after")
    def check_factorization(self):
        if self.value < 1:
            raise ValueError("value must be positive")
        if math.prod(self.factors) != self.value:
            raise ValueError(f"factors {self.factors} do not multiply to {self.value}")
        if any(p < 2 for p in self.factors):
            raise ValueError("factors must be primes")
        if any(a >= b for a, b in zip(self.factors, self.factors[1:])):
            raise ValueError("factors must be strictly increasing (squarefree)")
        if self.residues_mod8 != tuple(p % 8 for p in self.factors):
            raise ValueError("residues_mod8 out of sync with factors")
        if self.residue_mod8 != self.value % 8 or self.is_even != (self.value % 2 == 0):
            raise ValueError("residue data out of sync with value")
        return self

    @classmethod
    def from_primes(cls, primes: Sequence[int]) -> "FactoredInteger":
        primes = tuple(int(p) for p in primes)
        value = math.prod(primes)
        return cls.model_construct(
            value=value,
            factors=primes,
            residues_mod8=tuple(p % 8 for p in primes),
            residue_mod8=value % 8,
            is_even=value % 2 == 0,
        )

    @property
    def factorization(self) -> tuple[tuple[int, int], ...]:
        return tuple((p, 1) for p in self.factors)

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def odd_factors(self) -> tuple[int, ...]:
        return self.factors[1:] if self.is_even else self.factors

    def odd_part(self) -> "FactoredInteger":
        if not self.is_even:
            return self
        return FactoredInteger.from_primes(self.odd_factors)


class NotSquarefree(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: int
    repeated_prime: int


class SieveCache(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    limit: int
    spf: np.ndarray

    @model_validator(mode="after")
    def check_table(self):
        if self.spf.shape != (self.limit + 1,):
            raise ValueError(f"spf table has shape {self.spf.shape}, expected ({self.limit + 1},)")
        self.spf.flags.writeable = False
        return self

    def is_prime(self, n: int) -> bool:
        self._check_range(n)
        return n >= 2 and int(self.spf[n]) == n

    def _check_range(self, n: int) -> None:
        if n < 1 or n > self.limit:
            raise DomainError(f"{n} is outside the sieve range 1..{self.limit}")


def build_sieve(limit: int) -> SieveCache:
    if limit < 2:
        raise UsageError(f"sieve limit must be at least 2, got {limit}")
    if limit > MAX_LIMIT:
        raise UsageError(f"sieve limit {limit} exceeds 2^32")
    try:
        spf = np.zeros(limit + 1, dtype=np.uint32)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p]:
                continue
            tail = spf[p * p :: p]
            tail[tail == 0] = p
        primes = np.flatnonzero(spf == 0)
        primes = primes[primes >= 2]
        spf[primes] = primes
    except MemoryError as exc:
        raise ResourceError(f"cannot allocate a sieve up to {limit}") from exc
    logger.info("built sieve up to %d", limit)
    return SieveCache(limit=limit, spf=spf)


def save_sieve(cache: SieveCache, path: Union[str, os.PathLike]) -> None:
    with open(path, "wb") as fh:
        fh.write(SIEVE_MAGIC)
        fh.write(_HEADER.pack(cache.limit))
        fh.write(cache.spf[2:].astype("<u4").tobytes())
    logger.info("persisted sieve up to %d at %s", cache.limit, path)


def load_sieve(path: Union[str, os.PathLike]) -> SieveCache:
    header_size = len(SIEVE_MAGIC) + _HEADER.size
    with open(path, "rb") as fh:
        head = fh.read(header_size)
    if len(head) != header_size or head[: len(SIEVE_MAGIC)] != SIEVE_MAGIC:
        raise DomainError(f"{path} is not a sieve cache file")
    (limit,) = _HEADER.unpack(head[len(SIEVE_MAGIC):])
    if limit < 2 or limit > MAX_LIMIT:
        raise DomainError(f"{path} declares an invalid limit {limit}")
    expected = header_size + 4 * (limit - 1)
    actual = os.path.getsize(path)
    if actual != expected:
        raise DomainError(f"{path} has {actual} bytes, expected {expected} for limit {limit}")
    body = np.fromfile(path, dtype="<u4", offset=header_size)
    spf = np.concatenate([np.zeros(2, dtype=np.uint32), body.astype(np.uint32)])
    logger.info("loaded sieve up to %d from %s", limit, path)
    return SieveCache(limit=int(limit), spf=spf)


def factor(n: int, cache: SieveCache) -> Union[FactoredInteger, NotSquarefree]:
    if n <= 1 or n > cache.limit:
        raise DomainError(f"{n} is outside the factorable range 2..{cache.limit}")
    primes = []
    m = n
    while m > 1:
        p = int(cache.spf[m])
        if primes and primes[-1] == p:
            return NotSquarefree(value=n, repeated_prime=p)
        primes.append(p)
        m //= p
    return FactoredInteger.from_primes(primes)


class FactorBlock(NamedTuple):
    values: np.ndarray  # int64, the integers factored
    primes: np.ndarray  # int64 (len(values), width); ascending primes, 0-padded
    omega: np.ndarray  # int64 distinct prime count (valid where squarefree)
    squarefree: np.ndarray  # bool


def factor_block(values: np.ndarray, cache: SieveCache) -> FactorBlock:
    """Vectorised :func:`factor` over an array of integers in 2..cache.limit.

    Row i of ``primes`` lists the prime factors of ``values[i]`` in ascending
    order when the value is squarefree; rows of non-squarefree values are
    abandoned at the first repeated prime.
    """
    values = np.asarray(values, dtype=np.int64)
    if values.size and (values.min() < 2 or values.max() > cache.limit):
        raise DomainError(f"block values outside the factorable range 2..{cache.limit}")
    remaining = values.copy()
    squarefree = np.ones(values.shape, dtype=bool)
    omega = np.zeros(values.shape, dtype=np.int64)
    previous = np.zeros(values.shape, dtype=np.int64)
    columns = []
    while True:
        active = (remaining > 1) & squarefree
        if not active.any():
            break
        p = np.where(active, cache.spf[remaining].astype(np.int64), 0)
        squarefree &= ~(active & (p == previous))
        active &= squarefree
        p = np.where(active, p, 0)
        columns.append(p)
        omega += active
        remaining //= np.where(active, p, 1)
        previous = p
    if columns:
        primes = np.stack(columns, axis=1)
    else:
        primes = np.zeros((values.size, 0), dtype=np.int64)
    return FactorBlock(values=values, primes=primes, omega=omega, squarefree=squarefree)


def jacobi(a: int, m: int) -> int:
    if m <= 0 or m % 2 == 0:
        raise DomainError(f"Jacobi symbol needs an odd positive modulus, got {m}")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def quartic_char_2(p: int) -> int:
    """(2/p)_4 as the power residue 2^((p-1)/4) mod p, for primes p = 1 mod 8."""
    if p % 8 != 1:
        raise DomainError(f"quartic character of 2 needs p = 1 mod 8, got {p}")
    value = pow(2, (p - 1) // 4, p)
    if value == 1:
        return 1
    if value == p - 1:
        return -1
    raise DomainError(f"{p} is not prime: 2^((p-1)/4) = {value} mod p")


def delta_p(p: int) -> int:
    character = quartic_char_2(p)
    if p % 16 == 1:
        return int(character == -1)
    return int(character == 1)


def delta_n(n: FactoredInteger) -> int:
    bad = [p for p in n.factors if p % 8 != 1]
    if bad:
        raise DomainError(f"delta(n) needs every prime factor = 1 mod 8, {n.value} has {bad}")
    return sum(delta_p(p) for p in n.factors) % 2
