# selmer/models.py
from typing import Optional
from sqlmodel import SQLModel, Field
from datetime import datetime


class AnalysisRecord(SQLModel, table=True):
    id: Optional[int] = Field(default=None, primary_key=True)
    n: int = Field(index=True, nullable=False)
    squarefree: bool = Field(default=True)
    coverage: Optional[str] = Field(default=None, description="criterion that produced the Selmer sizes")
    family: Optional[str] = Field(default=None)
    verdict: Optional[str] = Field(default=None, description="CONGRUENT, NON_CONGRUENT or UNKNOWN")
    bsd_set: Optional[str] = Field(default=None)
    bsd_verified: bool = Field(default=False)
    s_phi: Optional[int] = Field(default=None)
    s_phihat: Optional[int] = Field(default=None)
    rank_upper_bound: Optional[int] = Field(default=None)
    non_congruent_certified: bool = Field(default=False)
    document: str = Field(nullable=False, description="JSON report")
    created_at: datetime = Field(default_factory=datetime.utcnow)


class CensusRecord(SQLModel, table=True):
    id: Optional[int] = Field(default=None, primary_key=True)
    statistic: str = Field(index=True, nullable=False)
    limit: int = Field(nullable=False, description="X, the upper end of the range")
    start: int = Field(default=1)
    k: int = Field(nullable=False)
    class_mod8: Optional[int] = Field(default=None)
    denominator: int = Field(nullable=False)
    document: str = Field(nullable=False, description="JSON report")
    runtime_seconds: float = Field(default=0.0)
    created_at: datetime = Field(default_factory=datetime.utcnow)


class SimulationRecord(SQLModel, table=True):
    id: Optional[int] = Field(default=None, primary_key=True)
    kind: str = Field(default="rank_distribution", description="rank_distribution or full_rank")
    k: int = Field(nullable=False)
    mode: str = Field(nullable=False, description="EXACT or MONTE_CARLO")
    trials: int = Field(nullable=False)
    seed: Optional[int] = Field(default=None)
    document: str = Field(nullable=False, description="JSON report")
    created_at: datetime = Field(default_factory=datetime.utcnow)
