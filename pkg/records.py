# selmer/records.py
import json
import logging
from typing import Optional, Union

from sqlmodel import Session, select

from census import CensusReport
from exceptions import UsageError
from models import AnalysisRecord, CensusRecord, SimulationRecord
from randsim import FullRankEstimate, RankDistribution
from selmer import AnalysisReport

logger = logging.getLogger(__name__)

RUN_KINDS = {
    "analysis": AnalysisRecord,
    "census": CensusRecord,
    "simulation": SimulationRecord,
}


def _dump(document: dict) -> str:
    return json.dumps(document, sort_keys=True)


def save_analysis(session: Session, report: AnalysisReport) -> AnalysisRecord:
    record = AnalysisRecord(n=report.n, squarefree=report.squarefree, document=_dump(report.to_document()))
    if report.squarefree:
        profile = report.profile
        record.coverage = profile.coverage.value
        record.family = report.family.family.value
        record.verdict = report.family.verdict.value
        record.bsd_set = report.bsd.set.value
        record.bsd_verified = report.bsd.verified
        record.s_phi = profile.s_phi
        record.s_phihat = profile.s_phihat
        record.rank_upper_bound = profile.rank_upper_bound
        record.non_congruent_certified = profile.non_congruent_certified
    session.add(record)
    session.commit()
    session.refresh(record)
    logger.info("recorded analysis of %d as #%d", report.n, record.id)
    return record


def save_census(session: Session, report: CensusReport) -> CensusRecord:
    record = CensusRecord(
        statistic=report.spec.statistic.value,
        limit=report.spec.limit,
        start=report.spec.start,
        k=report.spec.k,
        class_mod8=report.spec.class_mod8,
        denominator=report.denominator_count,
        document=_dump(report.to_document()),
        runtime_seconds=report.runtime_seconds,
        created_at=report.created_at,
    )
    session.add(record)
    session.commit()
    session.refresh(record)
    logger.info("recorded %s census as #%d", record.statistic, record.id)
    return record


def save_simulation(session: Session, result: Union[RankDistribution, FullRankEstimate]) -> SimulationRecord:
    kind = "full_rank" if isinstance(result, FullRankEstimate) else "rank_distribution"
    record = SimulationRecord(
        kind=kind,
        k=result.k,
        mode=result.mode.value,
        trials=result.total,
        seed=result.seed,
        document=_dump(result.to_document()),
    )
    session.add(record)
    session.commit()
    session.refresh(record)
    logger.info("recorded %s simulation as #%d", kind, record.id)
    return record


def list_runs(session: Session, kind: Optional[str] = None, limit: int = 20) -> list:
    if kind is not None and kind not in RUN_KINDS:
        raise UsageError(f"unknown run kind {kind!r}; expected one of {sorted(RUN_KINDS)}")
    tables = [RUN_KINDS[kind]] if kind else list(RUN_KINDS.values())
    runs = []
    for table in tables:
        runs.extend(session.exec(select(table).order_by(table.created_at.desc()).limit(limit)).all())
    runs.sort(key=lambda record: (record.created_at, record.id), reverse=True)
    return runs[:limit]
