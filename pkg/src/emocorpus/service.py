"""HTTP JSON API: review queue, corpus browsing, gate mutation, patterns.

The service owns the store's write lock for its lifetime; request handlers
serialize store access through one process-wide lock, so concurrent HTTP
clients cannot interleave mutations.  Error bodies are always
``{"code": ..., "message": ...}``.
"""

from __future__ import annotations

import math
import threading
from pathlib import Path

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .curation import (
    DEFAULT_BANDS,
    DISPOSITIONS,
    PENDING,
    AlreadyDisposed,
    CefrBandTable,
    InvalidGrade,
    gate_to_dict,
    record_review,
)
from .store import CorpusRecord, CorpusStore, StoreLocked, record_to_dict
from .transcript import CEFR_LEVELS, EMOTIONS, dialogue_to_dict


class ReviewSubmission(BaseModel):
    qoi: str
    reviewer: str = ""
    emotional_coherence: bool | None = None
    complexity_coherence: bool | None = None


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _summary(record: CorpusRecord) -> dict:
    meta = record.dialogue.meta
    return {
        "id": record.dialogue.id,
        "emotion": meta.target_emotion,
        "cefr": meta.cefr,
        "implicit": meta.implicit,
        "disposition": record.gate.disposition,
        "qoi": record.gate.qoi,
        "turn_count": len(record.dialogue.turns),
    }


def _parse_bool(value: str) -> bool | None:
    low = value.lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ValueError(value)


def create_app(store: CorpusStore, bands: CefrBandTable = DEFAULT_BANDS, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="dialogue corpus review service")
    lock = threading.Lock()

    def task_payload(record: CorpusRecord) -> dict:
        gate = record.gate
        lo, hi = bands.interval(record.dialogue.meta.cefr)
        return {
            "dialogue_id": record.dialogue.id,
            "dialogue": dialogue_to_dict(record.dialogue),
            "evidence": {
                "emotional_coherence": gate.emotional_coherence,
                "complexity_coherence": gate.complexity_coherence,
                "emotion_evidence": gate.emotion_evidence,
                "ied_violations": [list(v) for v in gate.ied_violations],
                "fkgl": gate.fkgl,
                "band": [lo, None if math.isinf(hi) else hi],
            },
            "status": "pending",
        }

    @app.exception_handler(StoreLocked)
    async def _store_locked(request, exc):
        return _error(500, "store_locked", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request, exc):
        return _error(422, "validation_error", str(exc))

    @app.get("/api/review/next")
    def review_next():
        with lock:
            pending = store.query(disposition=PENDING)
        if not pending:
            return Response(status_code=204)
        return task_payload(pending[0])

    @app.post("/api/review/{dialogue_id}")
    def submit_review(dialogue_id: str, body: ReviewSubmission):
        with lock:
            try:
                record = store.get(dialogue_id)
            except KeyError:
                return _error(404, "unknown_dialogue", f"no dialogue with id {dialogue_id!r}")
            try:
                gate = record_review(
                    record.gate,
                    body.qoi,
                    body.reviewer,
                    emotional_coherence=body.emotional_coherence,
                    complexity_coherence=body.complexity_coherence,
                )
            except InvalidGrade as exc:
                return _error(422, "invalid_qoi", str(exc))
            except AlreadyDisposed as exc:
                return _error(409, "already_disposed", str(exc))
            store.amend_gate(dialogue_id, gate)
        return gate_to_dict(gate)

    @app.get("/api/corpus")
    def corpus(
        emotion: str | None = None,
        cefr: str | None = None,
        implicit: str | None = None,
        disposition: str | None = None,
    ):
        if emotion is not None and emotion not in EMOTIONS:
            return _error(422, "invalid_filter", f"unknown emotion {emotion!r}")
        if cefr is not None and cefr not in CEFR_LEVELS:
            return _error(422, "invalid_filter", f"unknown CEFR level {cefr!r}")
        if disposition is not None and disposition not in DISPOSITIONS:
            return _error(422, "invalid_filter", f"unknown disposition {disposition!r}")
        implicit_flag = None
        if implicit is not None:
            try:
                implicit_flag = _parse_bool(implicit)
            except ValueError:
                return _error(422, "invalid_filter", f"implicit must be true or false, got {implicit!r}")
        with lock:
            records = store.query(emotion=emotion, cefr=cefr, implicit=implicit_flag, disposition=disposition)
        return [_summary(r) for r in records]

    @app.get("/api/corpus/{dialogue_id}")
    def corpus_record(dialogue_id: str):
        with lock:
            try:
                record = store.get(dialogue_id)
            except KeyError:
                return _error(404, "unknown_dialogue", f"no dialogue with id {dialogue_id!r}")
        return record_to_dict(record)

    @app.get("/api/patterns")
    def patterns(n: int = 2, min_support: int = 1, emotion: str | None = None, cefr: str | None = None):
        if n < 2:
            return _error(422, "invalid_filter", "n must be at least 2")
        if min_support < 1:
            return _error(422, "invalid_filter", "min_support must be at least 1")
        if emotion is not None and emotion not in EMOTIONS:
            return _error(422, "invalid_filter", f"unknown emotion {emotion!r}")
        if cefr is not None and cefr not in CEFR_LEVELS:
            return _error(422, "invalid_filter", f"unknown CEFR level {cefr!r}")
        with lock:
            mined = store.mine_chain_patterns(n=n, min_support=min_support, emotion=emotion, cefr=cefr)
        return [{"pattern": [list(entry) for entry in p.ngram], "support": p.support} for p in mined]

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
