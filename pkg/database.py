# selmer/database.py
import os

from sqlmodel import create_engine, Session

import models

DATABASE_URL = os.environ.get("SELMER_DATABASE_URL", "sqlite:///./selmer.db")


def make_engine(url: str = DATABASE_URL):
    echo = os.environ.get("SELMER_SQL_ECHO", "").lower() in ("1", "true", "yes")
    engine = create_engine(url, echo=echo)
    models.SQLModel.metadata.create_all(engine)
    return engine


def get_session(engine):
    with Session(engine) as session:
        yield session
