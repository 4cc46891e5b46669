"""HTTP surface for the session workflow.

Thin adapter over :mod:`fairfuse.session`: handlers validate the request
shape, take the per-session lock, call the workflow function, snapshot,
and serialize. All domain rules live in the workflow layer so the CLI and
tests exercise the same code paths.

Responses carry a ``"schema": 1`` envelope and are rendered with sorted
keys, so identical state always produces identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import serialize
from .errors import (
    BaseRankingImmutable,
    CannotDeletePinned,
    FairfuseError,
    InvalidRequest,
    RankingNotFound,
    SessionNotFound,
)
from .ingestion import parse_dataset, parse_rankings, parse_scores, rankings_from_scores
from .metrics import DEFAULT_HISTOGRAM_BINS
from .session import (
    Session,
    SessionStore,
    create_session,
    delete_ranking,
    edit_ranking,
    generate_consensus,
    pin_ranking,
    session_similarity,
    session_to_dict,
    unpin_ranking,
)

_STATUS_BY_CODE = {
    SessionNotFound.__name__: 404,
    RankingNotFound.__name__: 404,
    BaseRankingImmutable.__name__: 409,
    CannotDeletePinned.__name__: 409,
}


def _json_response(payload: dict[str, Any], status_code: int = 200) -> Response:
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return Response(content=body, status_code=status_code, media_type="application/json")


def _envelope(**fields: Any) -> dict[str, Any]:
    return {"schema": serialize.SCHEMA_VERSION, **fields}


def _require_str(body: dict[str, Any], key: str) -> str:
    value = body.get(key)
    if not isinstance(value, str) or not value:
        raise InvalidRequest(f"field {key!r} must be a non-empty string", field=key)
    return value


def _require_number(body: dict[str, Any], key: str) -> float:
    value = body.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidRequest(f"field {key!r} must be a number", field=key)
    return float(value)


def _require_int(body: dict[str, Any], key: str) -> int:
    value = body.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidRequest(f"field {key!r} must be an integer", field=key)
    return value


def create_app(store: SessionStore, *, static_dir: str | Path | None = None) -> FastAPI:
    """Build the API application around one session store."""
    app = FastAPI(title="fairfuse", docs_url=None, redoc_url=None, openapi_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(FairfuseError)
    async def _domain_error(_request: Request, exc: FairfuseError) -> Response:
        status = _STATUS_BY_CODE.get(exc.code, 400)
        payload = _envelope(
            error={"code": exc.code, "message": exc.message, "detail": exc.detail}
        )
        return _json_response(payload, status_code=status)

    def _locked(session_id: str) -> tuple[Any, Session]:
        lock = store.lock(session_id)
        lock.acquire()
        try:
            session = store.get(session_id)
        except BaseException:
            lock.release()
            raise
        return lock, session

    @app.post("/sessions")
    def post_session(body: dict[str, Any]) -> Response:
        protected = _require_str(body, "protected")
        candidates_csv = _require_str(body, "candidates_csv")
        has_scores = "scores_csv" in body
        has_rankings = "rankings_csv" in body
        if has_scores == has_rankings:
            raise InvalidRequest(
                "provide exactly one of 'scores_csv' or 'rankings_csv'",
                field="scores_csv",
            )
        bins = DEFAULT_HISTOGRAM_BINS
        if "bins" in body:
            bins = _require_int(body, "bins")
            if bins < 1:
                raise InvalidRequest("field 'bins' must be at least 1", field="bins")

        dataset = parse_dataset(candidates_csv, protected, source="candidates_csv")
        if has_scores:
            table = parse_scores(_require_str(body, "scores_csv"), source="scores_csv")
            bases = rankings_from_scores(table)
        else:
            bases = parse_rankings(
                _require_str(body, "rankings_csv"), source="rankings_csv"
            )
        session = create_session(dataset, bases, bins=bins)
        with store.lock(session.id):
            store.add(session)
            payload = _envelope(
                session_id=session.id,
                session=session_to_dict(session),
                audits={
                    rid: serialize.report_to_dict(report)
                    for rid, report in sorted(session.audit_cache.items())
                },
                similarity=serialize.matrix_to_dict(session_similarity(session)),
            )
        return _json_response(payload, status_code=201)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> Response:
        lock, session = _locked(session_id)
        try:
            payload = _envelope(session=session_to_dict(session))
        finally:
            lock.release()
        return _json_response(payload)

    @app.get("/sessions/{session_id}/similarity")
    def get_similarity(session_id: str) -> Response:
        lock, session = _locked(session_id)
        try:
            payload = _envelope(
                similarity=serialize.matrix_to_dict(session_similarity(session))
            )
        finally:
            lock.release()
        return _json_response(payload)

    @app.post("/sessions/{session_id}/consensus")
    def post_consensus(session_id: str, body: dict[str, Any]) -> Response:
        t = _require_number(body, "t")
        lock, session = _locked(session_id)
        try:
            result = generate_consensus(session, t)
            store.save(session)
            payload = _envelope(
                result=serialize.consensus_to_dict(result),
                report=serialize.report_to_dict(session.audit_cache[result.ranking.id]),
                similarity=serialize.matrix_to_dict(session_similarity(session)),
                slider={"t_effective_min": session.t_effective_min},
            )
        finally:
            lock.release()
        return _json_response(payload, status_code=201)

    @app.post("/sessions/{session_id}/rankings/{ranking_id}/edit")
    def post_edit(session_id: str, ranking_id: str, body: dict[str, Any]) -> Response:
        candidate = _require_str(body, "candidate")
        position = _require_int(body, "position")
        lock, session = _locked(session_id)
        try:
            result, report, changed = edit_ranking(session, ranking_id, candidate, position)
            if changed:
                store.save(session)
            payload = _envelope(
                ranking=serialize.ranking_to_dict(result.ranking),
                report=serialize.report_to_dict(report),
                result=serialize.consensus_to_dict(result),
                similarity=serialize.matrix_to_dict(session_similarity(session)),
                changed=changed,
            )
        finally:
            lock.release()
        return _json_response(payload)

    @app.post("/sessions/{session_id}/rankings/{ranking_id}/pin")
    def post_pin(session_id: str, ranking_id: str) -> Response:
        lock, session = _locked(session_id)
        try:
            pin_ranking(session, ranking_id)
            store.save(session)
            payload = _envelope(pinned_ids=sorted(session.pinned_ids))
        finally:
            lock.release()
        return _json_response(payload)

    @app.delete("/sessions/{session_id}/rankings/{ranking_id}/pin")
    def delete_pin(session_id: str, ranking_id: str) -> Response:
        lock, session = _locked(session_id)
        try:
            unpin_ranking(session, ranking_id)
            store.save(session)
            payload = _envelope(pinned_ids=sorted(session.pinned_ids))
        finally:
            lock.release()
        return _json_response(payload)

    @app.delete("/sessions/{session_id}/rankings/{ranking_id}")
    def delete_generated(session_id: str, ranking_id: str) -> Response:
        lock, session = _locked(session_id)
        try:
            delete_ranking(session, ranking_id)
            store.save(session)
            payload = _envelope(deleted=ranking_id, session=session_to_dict(session))
        finally:
            lock.release()
        return _json_response(payload)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
