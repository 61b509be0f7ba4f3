"""HTTP session API: a thin stateless-protocol wrapper over sessions.

One service instance holds a read-only corpus registry and a store of
live sessions. Every mutation goes through an optimistic-concurrency
check: the client sends the version (log length) it last saw and the
server rejects the answer with 409 if the session has moved on. Accepted
answers are persisted to disk immediately; the in-memory store is only a
cache, and the store is rebuilt from the session files on startup.

Responses are JSON objects; list endpoints (/dialogues, /reports/stats)
and session export are JSON-lines record streams.
"""
from __future__ import annotations

import json
import mimetypes
import threading
import uuid
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any
from urllib.parse import parse_qs, urlsplit

from .corpus import Corpus, Turn
from .errors import (
    CrannoError,
    IllegalAnswerError,
    SessionFinishedError,
    UnknownDialogueError,
)
from .ladder import GROUNDED_LEVELS, Proposal
from .recipe import (
    Annotation,
    DecisionLog,
    LogEntry,
    Point,
    Session,
    annotations,
    apply_answer,
    next_prompt,
    parse_session_file,
    replay,
    serialize_log,
    start_session,
)
from .records import dump_records
from .stats import dialogue_stats_record

JSON = "application/json"
NDJSON = "application/x-ndjson"

Response = tuple[int, str, str]


def _json_body(status: int, payload: dict[str, Any]) -> Response:
    return status, json.dumps(payload, ensure_ascii=False), JSON


def _error(status: int, message: str) -> Response:
    return _json_body(status, {"error": message})


def turn_record(turn: Turn) -> dict[str, Any]:
    record: dict[str, Any] = {
        "index": turn.index,
        "speaker": turn.speaker,
        "kind": turn.kind.value,
        "text": turn.text,
    }
    if turn.action_note is not None:
        record["action_note"] = turn.action_note
    return record


def annotation_record(annotation: Annotation) -> dict[str, Any]:
    record: dict[str, Any] = {
        "turn": annotation.turn,
        "label": annotation.label.value,
    }
    if annotation.source is not None:
        record["source"] = annotation.source
    if annotation.level is not None:
        record["level"] = annotation.level.value
    if annotation.gp_tag is not None:
        record["gp_tag"] = annotation.gp_tag
    return record


def _proposal_record(proposal: Proposal) -> dict[str, Any]:
    record: dict[str, Any] = {
        "source": proposal.source.index,
        "proposer": proposal.proposer,
        "satisfied": [l.value for l in GROUNDED_LEVELS if l in proposal.satisfied],
    }
    if proposal.closed:
        record["close_cause"] = (
            proposal.close_cause.value if proposal.close_cause else None
        )
        record["closed_by"] = (
            proposal.closed_by.index if proposal.closed_by else None
        )
    return record


@dataclass
class _Stored:
    corpus_id: str
    session: Session


class AnnotationService:
    """Routes requests to session operations; safe for concurrent use."""

    def __init__(self, corpora: dict[str, Corpus], session_dir: str | Path):
        self._corpora = dict(corpora)
        self._dir = Path(session_dir)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._store: dict[str, _Stored] = {}
        self._load_existing()

    # -- persistence ---------------------------------------------------

    def _session_path(self, session_id: str) -> Path:
        return self._dir / f"{session_id}.session.jsonl"

    def _meta_path(self, session_id: str) -> Path:
        return self._dir / f"{session_id}.meta.json"

    def _persist(self, session_id: str, stored: _Stored) -> None:
        self._session_path(session_id).write_text(
            serialize_log(stored.session.log), encoding="utf-8"
        )
        self._meta_path(session_id).write_text(
            json.dumps({"corpus": stored.corpus_id}), encoding="utf-8"
        )

    def _load_existing(self) -> None:
        for meta_path in sorted(self._dir.glob("*.meta.json")):
            session_id = meta_path.name.removesuffix(".meta.json")
            corpus_id = json.loads(meta_path.read_text("utf-8"))["corpus"]
            if corpus_id not in self._corpora:
                continue
            log = parse_session_file(
                self._session_path(session_id).read_text("utf-8")
            )
            session = replay(self._corpora[corpus_id], log)
            self._store[session_id] = _Stored(corpus_id, session)

    # -- request entry point -------------------------------------------

    def handle_request(self, method: str, path: str, body: str | None = None) -> Response:
        """Dispatch one request; returns (status, body, content type)."""
        split = urlsplit(path)
        parts = [p for p in split.path.split("/") if p]
        query = parse_qs(split.query)
        try:
            return self._route(method.upper(), parts, query, body)
        except CrannoError as exc:
            return _error(422, str(exc))

    def _route(self, method: str, parts: list[str], query: dict[str, list[str]],
               body: str | None) -> Response:
        if parts == ["sessions"] and method == "POST":
            return self._create_session(body)
        if len(parts) >= 2 and parts[0] == "sessions":
            session_id = parts[1]
            rest = parts[2:]
            if not rest and method == "GET":
                return self._get_session(session_id)
            if rest == ["prompt"] and method == "GET":
                return self._get_prompt(session_id)
            if rest == ["answer"] and method == "POST":
                return self._post_answer(session_id, body)
            if rest == ["export"] and method == "GET":
                return self._export(session_id)
        if parts == ["dialogues"] and method == "GET":
            return self._list_dialogues()
        if parts == ["reports", "stats"] and method == "GET":
            return self._report_stats(query)
        return _error(404, "no such route")

    # -- handlers --------------------------------------------------------

    def _parse_json(self, body: str | None) -> dict[str, Any]:
        if not body:
            raise ValueError("request body required")
        payload = json.loads(body)
        if not isinstance(payload, dict):
            raise ValueError("request body must be an object")
        return payload

    def _create_session(self, body: str | None) -> Response:
        try:
            payload = self._parse_json(body)
            corpus_id = payload["corpus"]
            dialogue_id = payload["dialogue"]
            annotator_id = payload["annotator"]
            raw_entries = payload.get("entries", [])
        except (ValueError, KeyError) as exc:
            return _error(400, f"bad request body: {exc}")
        corpus = self._corpora.get(corpus_id)
        if corpus is None:
            return _error(404, f"unknown corpus {corpus_id!r}")
        try:
            session = start_session(corpus, dialogue_id, annotator_id)
        except UnknownDialogueError as exc:
            return _error(404, str(exc))
        if raw_entries:
            # Replay-on-create: lets a client rebuild a session from a log
            # prefix, which is how the UI implements undo.
            try:
                entries = tuple(
                    LogEntry(
                        turn=e["turn"],
                        point=_point(e["point"]),
                        answer=e["answer"],
                        gp_tag=e.get("gp_tag"),
                    )
                    for e in raw_entries
                )
            except (TypeError, KeyError) as exc:
                return _error(400, f"bad entries: {exc}")
            log = DecisionLog(
                dialogue_id=dialogue_id,
                annotator_id=annotator_id,
                entries=entries,
            )
            session = replay(corpus, log)
        session_id = uuid.uuid4().hex
        stored = _Stored(corpus_id, session)
        with self._lock:
            self._store[session_id] = stored
            self._persist(session_id, stored)
        return _json_body(
            201, {"session_id": session_id, "version": session.version}
        )

    def _lookup(self, session_id: str) -> _Stored | None:
        with self._lock:
            return self._store.get(session_id)

    def _get_session(self, session_id: str) -> Response:
        stored = self._lookup(session_id)
        if stored is None:
            return _error(404, f"unknown session {session_id!r}")
        session = stored.session
        dialogue = session.dialogue
        view = {
            "session_id": session_id,
            "version": session.version,
            "corpus": stored.corpus_id,
            "dialogue": session.dialogue_id,
            "annotator": session.annotator_id,
            "cursor": session.cursor,
            "finished": session.finished,
            "turns": [turn_record(t) for t in dialogue.turns],
            "stack": {
                "entries": [_proposal_record(p) for p in session.stack.entries],
                "closed": [_proposal_record(p) for p in session.stack.closed_log],
            },
            "annotations": [annotation_record(a) for a in session.annotations],
        }
        return _json_body(200, view)

    def _get_prompt(self, session_id: str) -> Response:
        stored = self._lookup(session_id)
        if stored is None:
            return _error(404, f"unknown session {session_id!r}")
        session = stored.session
        if session.finished:
            return _json_body(200, {"finished": True, "version": session.version})
        prompt = next_prompt(session)
        return _json_body(
            200,
            {
                "finished": False,
                "version": session.version,
                "point": prompt.point.value,
                "turn": prompt.turn,
                "candidate_source": prompt.candidate_source,
                "question": prompt.question,
                "answers": list(prompt.answers),
            },
        )

    def _post_answer(self, session_id: str, body: str | None) -> Response:
        try:
            payload = self._parse_json(body)
            version = payload["version"]
            answer = payload["answer"]
            gp_tag = payload.get("gp_tag")
        except (ValueError, KeyError) as exc:
            return _error(400, f"bad request body: {exc}")
        with self._lock:
            stored = self._store.get(session_id)
            if stored is None:
                return _error(404, f"unknown session {session_id!r}")
            session = stored.session
            if version != session.version:
                return _json_body(
                    409,
                    {
                        "error": "version mismatch",
                        "version": session.version,
                    },
                )
            try:
                new_session = apply_answer(session, answer, gp_tag=gp_tag)
            except (IllegalAnswerError, SessionFinishedError) as exc:
                return _error(422, str(exc))
            stored.session = new_session
            self._persist(session_id, stored)
            return _json_body(
                200,
                {"version": new_session.version, "finished": new_session.finished},
            )

    def _export(self, session_id: str) -> Response:
        stored = self._lookup(session_id)
        if stored is None:
            return _error(404, f"unknown session {session_id!r}")
        return 200, serialize_log(stored.session.log), NDJSON

    def _list_dialogues(self) -> Response:
        records = [
            {
                "corpus": corpus_id,
                "dialogue": d.dialogue_id,
                "turns": len(d.turns),
            }
            for corpus_id, corpus in sorted(self._corpora.items())
            for d in corpus.dialogues
        ]
        return 200, dump_records(records), NDJSON

    def _report_stats(self, query: dict[str, list[str]]) -> Response:
        wanted = query.get("dialogue", [None])[0]
        records = []
        with self._lock:
            items = sorted(self._store.items())
        for session_id, stored in items:
            session = stored.session
            if wanted is not None and session.dialogue_id != wanted:
                continue
            record = dialogue_stats_record(annotations(session), session.dialogue)
            record = {
                "session": session_id,
                "annotator": session.annotator_id,
                **record,
            }
            records.append(record)
        return 200, dump_records(records), NDJSON


def _point(value: str) -> Point:
    try:
        return Point(value)
    except ValueError:
        raise CrannoError(f"unknown point {value!r}") from None


def make_http_server(
    service: AnnotationService, port: int, ui_dir: str | Path | None = None
) -> ThreadingHTTPServer:
    """Bind the service (and optionally a static UI build) to a port."""
    ui_root = Path(ui_dir).resolve() if ui_dir else None

    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args: Any) -> None:  # keep test output quiet
            pass

        def _send(self, response: Response) -> None:
            status, body, content_type = response
            payload = body.encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", f"{content_type}; charset=utf-8")
            self.send_header("Content-Length", str(len(payload)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(payload)

        def _try_static(self) -> bool:
            if ui_root is None:
                return False
            relative = urlsplit(self.path).path.lstrip("/") or "index.html"
            candidate = (ui_root / relative).resolve()
            if not candidate.is_relative_to(ui_root) or not candidate.is_file():
                return False
            payload = candidate.read_bytes()
            content_type = (
                mimetypes.guess_type(candidate.name)[0] or "application/octet-stream"
            )
            self.send_response(200)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)
            return True

        def do_GET(self) -> None:
            path = urlsplit(self.path).path
            known = path.startswith(("/sessions", "/dialogues", "/reports"))
            if not known and self._try_static():
                return
            self._send(service.handle_request("GET", self.path))

        def do_POST(self) -> None:
            length = int(self.headers.get("Content-Length") or 0)
            body = self.rfile.read(length).decode("utf-8") if length else None
            self._send(service.handle_request("POST", self.path, body))

        def do_OPTIONS(self) -> None:
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()

    return ThreadingHTTPServer(("127.0.0.1", port), Handler)
