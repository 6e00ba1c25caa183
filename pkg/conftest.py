# selmer/conftest.py
import os
import sys

import pytest
from sqlmodel import Session

sys.path.insert(0, os.path.dirname(__file__))

from arith import build_sieve  # noqa: E402
from database import make_engine  # noqa: E402

TEST_SIEVE_LIMIT = 200_000


@pytest.fixture(scope="session")
def sieve():
    return build_sieve(TEST_SIEVE_LIMIT)


@pytest.fixture
def session():
    engine = make_engine("sqlite://")
    with Session(engine) as session:
        yield session
