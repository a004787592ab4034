"""Session service: JSON over HTTP for the interactive author loop."""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles

from .config import Config
from .errors import ProviderError, RequestValidationError, RespkitError
from .generation import (
    GenerationRequest,
    generate,
    refinement_request,
    request_from_record,
    request_to_record,
    result_from_record,
    result_to_record,
)
from .metrics.report import EvalReport, evaluate_response
from .providers import AuditLog
from .taxonomy import ACTION_STANCE, ITEM_TYPES, ResponsePlan, ReviewItem
from .metrics.quality import annotate_response

UI_SETTINGS = ("S2", "S3", "S6", "S7")


@dataclass
class Session:
    session_id: str
    review_segment: str
    venue_mode: str = "journal"
    author_edits: list[dict] = field(default_factory=list)
    v1_paragraphs: list[str] = field(default_factory=list)
    review_items: list[dict] = field(default_factory=list)
    plan: dict | None = None
    length_limit: int | None = None
    drafts: list[dict] = field(default_factory=list)
    status: str = "idle"

    def view(self) -> dict:
        return {
            "session_id": self.session_id,
            "review_segment": self.review_segment,
            "venue_mode": self.venue_mode,
            "author_edits": self.author_edits,
            "v1_paragraphs": self.v1_paragraphs,
            "review_items": self.review_items,
            "plan": self.plan,
            "length_limit": self.length_limit,
            "drafts": self.drafts,
            "status": self.status,
        }


class SessionStore:
    """Append-only event log per session; replay restores committed state."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.sessions: dict[str, Session] = {}
        for path in sorted(self.root.glob("*.events.jsonl")):
            session = self._replay(path)
            self.sessions[session.session_id] = session

    def _path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.events.jsonl"

    def _replay(self, path: Path) -> Session:
        session = None
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            event = json.loads(line)
            session = _apply_event(session, event)
        return session

    def _commit(self, session_id: str, event: dict):
        with self._path(session_id).open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False) + "\n")

    def create(self, review_segment: str, venue_mode: str = "journal") -> Session:
        session_id = uuid.uuid4().hex[:12]
        event = {
            "event": "created",
            "session_id": session_id,
            "review_segment": review_segment,
            "venue_mode": venue_mode,
        }
        session = _apply_event(None, event)
        self._commit(session_id, event)
        self.sessions[session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        if session_id not in self.sessions:
            raise KeyError(session_id)
        return self.sessions[session_id]

    def apply(self, session_id: str, event: dict) -> Session:
        session = self.get(session_id)
        updated = _apply_event(session, event)
        self._commit(session_id, event)
        self.sessions[session_id] = updated
        return updated


def _apply_event(session: Session | None, event: dict) -> Session:
    kind = event["event"]
    if kind == "created":
        return Session(
            session_id=event["session_id"],
            review_segment=event["review_segment"],
            venue_mode=event.get("venue_mode", "journal"),
        )
    assert session is not None
    if kind == "inputs_set":
        session.author_edits = event.get("author_edits", session.author_edits)
        session.v1_paragraphs = event.get("v1_paragraphs", session.v1_paragraphs)
    elif kind == "items_set":
        session.review_items = event["review_items"]
    elif kind == "plan_set":
        session.plan = event.get("plan")
        session.length_limit = event.get("length_limit")
    elif kind == "draft_added":
        session.drafts.append(
            {"request": event["request"], "result": event["result"], "eval": None}
        )
    elif kind == "eval_added":
        session.drafts[event["draft_index"]]["eval"] = event["report"]
    return session


def _session_request(session: Session, setting: str) -> GenerationRequest:
    record = {
        "setting": setting,
        "review_segment": session.review_segment,
        "author_edits": session.author_edits,
        "v1_paragraphs": session.v1_paragraphs,
        "length_limit": session.length_limit,
        "plan": session.plan,
        "review_items": session.review_items,
        "venue_mode": session.venue_mode,
        "pair_id": session.session_id,
    }
    return request_from_record(record)


def create_app(config: Config | None = None, data_dir="respkit_data", frontend_dir=None) -> FastAPI:
    config = config or Config()
    data_dir = Path(data_dir)
    store = SessionStore(data_dir / "sessions")
    audit = AuditLog(data_dir / "audit.jsonl")
    generation_provider = config.make_generation(audit)
    judge = config.make_judge(audit)
    extractor, verifier = config.make_fact_providers(audit)

    app = FastAPI(title="respkit", version="0.1.0")
    locks: dict[str, threading.Lock] = {}
    locks_guard = threading.Lock()

    def session_lock(session_id: str) -> threading.Lock:
        with locks_guard:
            return locks.setdefault(session_id, threading.Lock())

    def get_session(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")

    def run_exclusive(session: Session, status: str, fn):
        lock = session_lock(session.session_id)
        if not lock.acquire(blocking=False):
            raise HTTPException(
                status_code=409,
                detail="another operation is in flight for this session",
            )
        session.status = status
        try:
            return fn()
        except RequestValidationError as exc:
            raise HTTPException(status_code=400, detail={"error": str(exc), "field": exc.field})
        except ProviderError as exc:
            session.status = "error"
            audit_id = audit.record("error", {"session": session.session_id}, error=str(exc))
            raise HTTPException(status_code=502, detail={"error": str(exc), "audit_id": audit_id})
        except RespkitError as exc:
            session.status = "error"
            raise HTTPException(status_code=422, detail=str(exc))
        finally:
            if session.status != "error":
                session.status = "idle"
            lock.release()

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/v1/taxonomy")
    def taxonomy():
        grouped: dict[str, list[str]] = {}
        for action, stance in ACTION_STANCE.items():
            grouped.setdefault(stance, []).append(action)
        return {
            "item_types": list(ITEM_TYPES),
            "actions_by_stance": grouped,
            "ui_settings": list(UI_SETTINGS),
        }

    @app.post("/v1/sessions", status_code=201)
    def create_session(payload: dict):
        review = (payload or {}).get("review_segment", "")
        if not review.strip():
            raise HTTPException(status_code=400, detail="review_segment is required")
        venue = (payload or {}).get("venue_mode", "journal")
        session = store.create(review, venue)
        return session.view()

    @app.get("/v1/sessions/{session_id}")
    def fetch_session(session_id: str):
        return get_session(session_id).view()

    @app.put("/v1/sessions/{session_id}/inputs")
    def set_inputs(session_id: str, payload: dict):
        session = get_session(session_id)
        event = {"event": "inputs_set"}
        if "author_edits" in payload:
            event["author_edits"] = payload["author_edits"]
        if "v1_paragraphs" in payload:
            event["v1_paragraphs"] = payload["v1_paragraphs"]
        return store.apply(session.session_id, event).view()

    @app.post("/v1/sessions/{session_id}/annotate")
    def annotate(session_id: str):
        session = get_session(session_id)

        def run():
            latest = session.drafts[-1]["result"]["response_text"] if session.drafts else ""
            annotation = annotate_response(session.review_segment, latest, judge)
            items = [
                {"id": i.item_id, "type": i.item_type, "span": i.span} for i in annotation.items
            ]
            store.apply(session.session_id, {"event": "items_set", "review_items": items})
            return {"review_items": items}

        return run_exclusive(session, "evaluating", run)

    @app.put("/v1/sessions/{session_id}/plan")
    def set_plan(session_id: str, payload: dict):
        session = get_session(session_id)
        plan = payload.get("plan")
        if plan is not None:
            try:
                ResponsePlan(actions_by_item={k: list(v) for k, v in plan.items()})
            except RespkitError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
        event = {
            "event": "plan_set",
            "plan": plan,
            "length_limit": payload.get("length_limit"),
        }
        return store.apply(session.session_id, event).view()

    @app.post("/v1/sessions/{session_id}/generate")
    def generate_draft(session_id: str, payload: dict):
        session = get_session(session_id)
        setting = (payload or {}).get("setting", "S2")

        def run():
            req = _session_request(session, setting)
            result = generate(req, generation_provider)
            store.apply(
                session.session_id,
                {
                    "event": "draft_added",
                    "request": request_to_record(req),
                    "result": result_to_record(result),
                },
            )
            return {"draft_index": len(session.drafts) - 1, "result": result_to_record(result)}

        return run_exclusive(session, "generating", run)

    @app.post("/v1/sessions/{session_id}/evaluate")
    def evaluate_draft(session_id: str, payload: dict | None = None):
        session = get_session(session_id)
        if not session.drafts:
            raise HTTPException(status_code=409, detail="no draft to evaluate")
        index = (payload or {}).get("draft_index", len(session.drafts) - 1)
        if not 0 <= index < len(session.drafts):
            raise HTTPException(status_code=404, detail=f"unknown draft {index}")

        def run():
            draft = session.drafts[index]
            req = request_from_record(draft["request"])
            result = result_from_record(draft["result"])
            report = evaluate_response(req, result, judge, extractor, verifier)
            record = report.to_record()
            store.apply(
                session.session_id,
                {"event": "eval_added", "draft_index": index, "report": record},
            )
            return {"draft_index": index, "report": record}

        return run_exclusive(session, "evaluating", run)

    @app.post("/v1/sessions/{session_id}/refine")
    def refine_draft(session_id: str, payload: dict | None = None):
        session = get_session(session_id)
        evaluated = [
            (i, d) for i, d in enumerate(session.drafts) if d.get("eval") is not None
        ]
        if not evaluated:
            raise HTTPException(
                status_code=409, detail="refine requires an evaluated draft"
            )
        index, draft = evaluated[-1]

        def run():
            base_req = request_from_record(draft["request"])
            prior = result_from_record(draft["result"])
            report = EvalReport.from_record(draft["eval"])
            ref_req = refinement_request(base_req, prior, report)
            result = generate(ref_req, generation_provider)
            store.apply(
                session.session_id,
                {
                    "event": "draft_added",
                    "request": request_to_record(ref_req),
                    "result": result_to_record(result),
                },
            )
            return {
                "draft_index": len(session.drafts) - 1,
                "refined_from": index,
                "result": result_to_record(result),
            }

        return run_exclusive(session, "generating", run)

    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
