# selmer/dependencies.py
import logging
import os
from enum import Enum
from pathlib import Path

from pydantic import BaseModel, Field, field_validator

from arith import MAX_LIMIT, SieveCache, build_sieve, load_sieve, save_sieve
from database import DATABASE_URL, get_session, make_engine
from exceptions import DomainError, ResourceError

logger = logging.getLogger(__name__)

DEFAULT_CACHE_PATH = "./selmer_sieve.bin"
DEFAULT_LIMIT = 10 ** 6


class OutputFormat(str, Enum):
    TEXT = "TEXT"
    JSON = "JSON"
    CSV = "CSV"


class CliConfig(BaseModel):
    cache_path: Path = Field(default_factory=lambda: Path(os.environ.get("SELMER_SIEVE_CACHE", DEFAULT_CACHE_PATH)))
    use_cache: bool = True
    threads: int = 1
    seed: int = 0
    output_format: OutputFormat = OutputFormat.TEXT
    limit: int = DEFAULT_LIMIT
    database_url: str = DATABASE_URL
    record: bool = False
    timing: bool = False

    @field_validator("threads")
    @classmethod
    def check_threads(cls, value: int) -> int:
        if value < 1:
            raise ValueError("threads must be at least 1")
        return value

    @field_validator("limit")
    @classmethod
    def check_limit(cls, value: int) -> int:
        if not 2 <= value <= MAX_LIMIT:
            raise ValueError(f"limit must lie in 2..{MAX_LIMIT}")
        return value


_SIEVES: dict[Path, SieveCache] = {}


def get_sieve(config: CliConfig, need: int = 0) -> SieveCache:
    target = max(need, config.limit)
    if target > MAX_LIMIT:
        raise DomainError(f"{target} is beyond the sieve range 2..{MAX_LIMIT}")
    cached = _SIEVES.get(config.cache_path)
    if cached is not None and cached.limit >= target:
        return cached
    if config.use_cache and config.cache_path.exists():
        cache = load_sieve(config.cache_path)
        if cache.limit >= target:
            _SIEVES[config.cache_path] = cache
            return cache
        logger.info("sieve cache at %s stops at %d, rebuilding to %d", config.cache_path, cache.limit, target)
    cache = build_sieve(target)
    if config.use_cache:
        try:
            save_sieve(cache, config.cache_path)
        except OSError as exc:
            raise ResourceError(f"cannot write sieve cache {config.cache_path}: {exc}") from exc
        _SIEVES[config.cache_path] = cache
    return cache


def open_session(config: CliConfig):
    return get_session(make_engine(config.database_url))
