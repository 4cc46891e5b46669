"""Session state, the edit workflow, and snapshot persistence.

A session bundles one dataset with the stakeholder rankings it was created
from, every consensus generated since, cached fairness reports for all of
them, and the pin set. All mutation goes through the functions in this
module so the cache and pin invariants hold no matter which surface (HTTP
or CLI) drives the change.

Persistence is one JSON snapshot file per session, written atomically
(temp file in the same directory, then ``os.replace``) with sorted keys so
saving an unchanged session reproduces the identical bytes.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from . import serialize
from .consensus import (
    ConsensusResult,
    GenerationRequest,
    apply_edit,
    copeland_ranking,
    exact_delta,
    fair_copeland,
)
from .errors import (
    BaseRankingImmutable,
    CannotDeletePinned,
    DuplicateId,
    EmptyRankingSet,
    RankingNotFound,
    SessionNotFound,
)
from .metrics import (
    DEFAULT_HISTOGRAM_BINS,
    FairnessReport,
    SimilarityMatrix,
    arp_exact,
    audit,
    similarity_matrix,
)
from .model import Dataset, Ranking


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def new_session_id() -> str:
    return uuid.uuid4().hex[:12]


@dataclass
class Session:
    """One dataset plus every ranking and audit attached to it."""

    id: str
    dataset: Dataset
    base_rankings: list[Ranking]
    generated: list[ConsensusResult] = field(default_factory=list)
    pinned_ids: set[str] = field(default_factory=set)
    audit_cache: dict[str, FairnessReport] = field(default_factory=dict)
    created_at: str = field(default_factory=_now)
    updated_at: str = field(default_factory=_now)
    gen_counter: int = 0
    bins: int = DEFAULT_HISTOGRAM_BINS
    t_effective_min: float = 0.0

    def all_rankings(self) -> list[Ranking]:
        return list(self.base_rankings) + [r.ranking for r in self.generated]

    def find_ranking(self, ranking_id: str) -> Ranking:
        for ranking in self.all_rankings():
            if ranking.id == ranking_id:
                return ranking
        raise RankingNotFound(
            f"no ranking {ranking_id!r} in session {self.id}", ranking_id=ranking_id
        )

    def _generated_index(self, ranking_id: str) -> int | None:
        for i, result in enumerate(self.generated):
            if result.ranking.id == ranking_id:
                return i
        return None

    def is_base(self, ranking_id: str) -> bool:
        return any(r.id == ranking_id for r in self.base_rankings)

    def touch(self) -> None:
        self.updated_at = _now()


def create_session(
    dataset: Dataset,
    base_rankings: Iterable[Ranking],
    *,
    bins: int = DEFAULT_HISTOGRAM_BINS,
    session_id: str | None = None,
) -> Session:
    """Build a session, auditing every base ranking up front.

    Also records the lowest threshold worth offering a client: one minus
    the disparity of the unconstrained consensus, below which tightening
    the threshold cannot change the output.
    """
    bases = list(base_rankings)
    if not bases:
        raise EmptyRankingSet("a session needs at least one base ranking")
    seen: set[str] = set()
    for ranking in bases:
        dataset.validate_ranking(ranking.order)
        if ranking.id in seen:
            raise DuplicateId(f"duplicate ranking id {ranking.id!r}", ranking_id=ranking.id)
        seen.add(ranking.id)

    session = Session(
        id=session_id if session_id is not None else new_session_id(),
        dataset=dataset,
        base_rankings=bases,
        bins=bins,
    )
    for ranking in bases:
        session.audit_cache[ranking.id] = audit(dataset, ranking, bins=bins)
    unconstrained = copeland_ranking(bases, dataset)
    assert unconstrained.achieved_arp_exact is not None
    session.t_effective_min = float(Fraction(1) - unconstrained.achieved_arp_exact)
    return session


def generate_consensus(session: Session, t: float) -> ConsensusResult:
    request = GenerationRequest(t=t)
    session.gen_counter += 1
    ranking_id = f"gen:{session.gen_counter}"
    result = fair_copeland(
        session.base_rankings,
        session.dataset,
        request,
        ranking_id=ranking_id,
        label=f"consensus t={t:g}",
    )
    session.generated.append(result)
    session.audit_cache[ranking_id] = audit(session.dataset, result.ranking, bins=session.bins)
    session.touch()
    return result


def _bump_edit_id(ranking_id: str) -> str:
    root, sep, count = ranking_id.rpartition(":edited:")
    if sep and count.isdigit():
        return f"{root}:edited:{int(count) + 1}"
    return f"{ranking_id}:edited:1"


def edit_ranking(
    session: Session, ranking_id: str, candidate_id: str, new_position: int
) -> tuple[ConsensusResult, FairnessReport, bool]:
    """Move one candidate inside a generated ranking and re-audit.

    Base rankings are source data and stay immutable. A real move renames
    the ranking (``:edited:<k>`` suffix), replaces the cached audit, and
    carries any pin over to the new id; a move that lands a candidate where
    it already sits leaves the session untouched and returns the cached
    state with ``changed=False``.
    """
    if session.is_base(ranking_id):
        raise BaseRankingImmutable(
            f"base ranking {ranking_id!r} cannot be edited", ranking_id=ranking_id
        )
    index = session._generated_index(ranking_id)
    if index is None:
        raise RankingNotFound(
            f"no ranking {ranking_id!r} in session {session.id}", ranking_id=ranking_id
        )
    result = session.generated[index]
    moved = apply_edit(result.ranking, candidate_id, new_position)
    if moved.order == result.ranking.order:
        return result, session.audit_cache[ranking_id], False

    new_ranking = Ranking(
        id=_bump_edit_id(ranking_id),
        label=result.ranking.label,
        order=moved.order,
        kind="edited",
    )
    exact = arp_exact(session.dataset, new_ranking)
    delta = exact_delta(result.threshold_used)
    new_result = replace(
        result,
        ranking=new_ranking,
        achieved_arp=float(exact),
        achieved_arp_exact=exact,
        feasible=exact <= delta,
        total_kt_cost=_recost(session, new_ranking),
    )
    session.generated[index] = new_result
    del session.audit_cache[ranking_id]
    report = audit(session.dataset, new_ranking, bins=session.bins)
    session.audit_cache[new_ranking.id] = report
    if ranking_id in session.pinned_ids:
        session.pinned_ids.discard(ranking_id)
        session.pinned_ids.add(new_ranking.id)
    session.touch()
    return new_result, report, True


def _recost(session: Session, ranking: Ranking) -> int:
    from .metrics import kendall_tau

    return sum(kendall_tau(ranking, base) for base in session.base_rankings)


def pin_ranking(session: Session, ranking_id: str) -> None:
    session.find_ranking(ranking_id)
    session.pinned_ids.add(ranking_id)
    session.touch()


def unpin_ranking(session: Session, ranking_id: str) -> None:
    session.find_ranking(ranking_id)
    session.pinned_ids.discard(ranking_id)
    session.touch()


def delete_ranking(session: Session, ranking_id: str) -> None:
    if session.is_base(ranking_id):
        raise BaseRankingImmutable(
            f"base ranking {ranking_id!r} cannot be deleted", ranking_id=ranking_id
        )
    index = session._generated_index(ranking_id)
    if index is None:
        raise RankingNotFound(
            f"no ranking {ranking_id!r} in session {session.id}", ranking_id=ranking_id
        )
    if ranking_id in session.pinned_ids:
        raise CannotDeletePinned(
            f"ranking {ranking_id!r} is pinned; unpin before deleting",
            ranking_id=ranking_id,
        )
    del session.generated[index]
    del session.audit_cache[ranking_id]
    session.touch()


def session_similarity(session: Session) -> SimilarityMatrix:
    rankings = session.all_rankings()
    if len(rankings) == 1:
        only = rankings[0]
        return SimilarityMatrix(
            ranking_ids=(only.id,), kt=((0,),), similarity=((1.0,),)
        )
    return similarity_matrix(rankings)


def session_to_dict(session: Session) -> dict[str, Any]:
    return {
        "schema": serialize.SCHEMA_VERSION,
        "id": session.id,
        "created_at": session.created_at,
        "updated_at": session.updated_at,
        "bins": session.bins,
        "gen_counter": session.gen_counter,
        "t_effective_min": session.t_effective_min,
        "dataset": serialize.dataset_to_dict(session.dataset),
        "base_rankings": [serialize.ranking_to_dict(r) for r in session.base_rankings],
        "generated": [serialize.consensus_to_dict(r) for r in session.generated],
        "pinned_ids": sorted(session.pinned_ids),
        "audit_cache": {
            rid: serialize.report_to_dict(report)
            for rid, report in sorted(session.audit_cache.items())
        },
    }


def session_from_dict(data: dict[str, Any]) -> Session:
    return Session(
        id=data["id"],
        dataset=serialize.dataset_from_dict(data["dataset"]),
        base_rankings=[serialize.ranking_from_dict(r) for r in data["base_rankings"]],
        generated=[serialize.consensus_from_dict(r) for r in data["generated"]],
        pinned_ids=set(data["pinned_ids"]),
        audit_cache={
            rid: serialize.report_from_dict(report)
            for rid, report in sorted(data["audit_cache"].items())
        },
        created_at=data["created_at"],
        updated_at=data["updated_at"],
        gen_counter=data["gen_counter"],
        bins=data["bins"],
        t_effective_min=data["t_effective_min"],
    )


class SessionStore:
    """In-memory session registry backed by per-session JSON snapshots."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._registry_lock = threading.Lock()

    def lock(self, session_id: str) -> threading.RLock:
        with self._registry_lock:
            lock = self._locks.get(session_id)
            if lock is None:
                lock = threading.RLock()
                self._locks[session_id] = lock
            return lock

    def path_for(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.json"

    def snapshot_bytes(self, session: Session) -> bytes:
        text = json.dumps(
            session_to_dict(session), sort_keys=True, indent=2, ensure_ascii=False
        )
        return (text + "\n").encode("utf-8")

    def save(self, session: Session) -> Path:
        target = self.path_for(session.id)
        payload = self.snapshot_bytes(session)
        fd, tmp_name = tempfile.mkstemp(
            dir=self.data_dir, prefix=f".{session.id}.", suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(payload)
            os.replace(tmp_name, target)
        except BaseException:
            # never leave half-written snapshots behind
            try:
                os.unlink(tmp_name)
            except FileNotFoundError:
                pass
            raise
        return target

    def add(self, session: Session) -> None:
        self._sessions[session.id] = session
        self.save(session)

    def get(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is not None:
            return session
        path = self.path_for(session_id)
        if path.exists():
            session = session_from_dict(json.loads(path.read_text(encoding="utf-8")))
            self._sessions[session_id] = session
            return session
        raise SessionNotFound(f"no session {session_id!r}", session_id=session_id)

    def list_ids(self) -> list[str]:
        on_disk = {p.stem for p in self.data_dir.glob("*.json")}
        return sorted(on_disk | set(self._sessions))
