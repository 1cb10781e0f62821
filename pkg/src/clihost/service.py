"""Local HTTP service: the boundary the web UI consumes.

One session per service instance. All mutations funnel through the model
operations under a single writer lock; run output is fanned out to any
number of event-stream subscribers without blocking the runner.
"""

from __future__ import annotations

import base64
import json
import os
import sys
import threading
from typing import Iterator, Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse, Response, StreamingResponse
from pydantic import BaseModel

from . import model, runner, specxml
from .assemble import assemble, preview_text
from .errors import (
    AlreadyTerminated,
    ExecutableNotFound,
    InputFileMissing,
    MissingRequired,
    MutationDuringRun,
    OptionValueError,
    RunAlreadyActive,
    SpawnFailed,
    UnknownOption,
)
from .model import SessionState, unmet_required
from .runner import RunRecord


class RunEventHub:
    """Ordered event log with live fan-out; subscribers replay from the
    start, then follow until the terminal status event."""

    def __init__(self):
        self._events: list[dict] = []
        self._cond = threading.Condition()
        self._closed = False

    def publish(self, event: dict, final: bool = False) -> None:
        with self._cond:
            self._events.append(event)
            if final:
                self._closed = True
            self._cond.notify_all()

    def subscribe(self, start: int = 0) -> Iterator[dict]:
        index = start
        while True:
            with self._cond:
                while index >= len(self._events) and not self._closed:
                    self._cond.wait(timeout=30)
                if index >= len(self._events):
                    return
                event = self._events[index]
            index += 1
            yield event


class ValueBody(BaseModel):
    raw: str


class AppState:
    def __init__(self, doc: specxml.SpecDocument, cwd: str):
        self.doc = doc
        self.session: SessionState = specxml.session_from_document(doc, cwd)
        self.session_id = "default"
        self.lock = threading.Lock()
        self.runs: dict[str, tuple[RunRecord, RunEventHub]] = {}


def _error(status: int, code: str, detail: str, **extra) -> JSONResponse:
    body = {"error": code, "detail": detail}
    body.update(extra)
    return JSONResponse(status_code=status, content=body)


def _option_record(state: SessionState, option_id: str) -> dict:
    opt = state.spec.find(option_id)
    ostate = state.states[option_id]
    record = {
        "id": opt.id,
        "group": state.spec.group_of(opt.id),
        "label": opt.label,
        "kind": opt.kind.value,
        "flag": opt.flag,
        "required": opt.required,
        "repeatable": opt.repeatable,
        "state": ostate.status,
        "doc": opt.doc,
        "default": opt.default,
        "choices": [{"value": v, "label": l} for v, l in opt.choices],
    }
    if ostate.is_set:
        raws = [model.render_raw(v) for v in ostate.values]
        record["values"] = raws
        record["value"] = raws[0] if len(raws) == 1 else None
    return record


def _session_resource(app_state: AppState) -> dict:
    session = app_state.session
    return {
        "session_id": app_state.session_id,
        "name": session.spec.name,
        "title": session.spec.display_title,
        "executable": session.spec.executable,
        "description": session.spec.description,
        "working_dir": session.working_dir,
        "groups": [
            {"name": g.name, "doc": g.doc, "options": [o.id for o in g.options]}
            for g in session.spec.groups
        ],
        "options": [_option_record(session, o.id) for o in session.spec.option_defs()],
        "active_run": session.active_run,
    }


def create_app(spec_path: str, cwd: Optional[str] = None,
               frontend_dir: Optional[str] = None) -> FastAPI:
    with open(spec_path, "rb") as fh:
        doc = specxml.parse_spec(fh.read())
    state = AppState(doc, cwd or os.getcwd())
    app = FastAPI(title=doc.spec.display_title or doc.spec.name)
    app.state.clihost = state

    @app.get("/api/session")
    def get_session():
        return _session_resource(state)

    @app.put("/api/options/{option_id}/value")
    def put_value(option_id: str, body: ValueBody):
        with state.lock:
            try:
                state.session = model.set_option(state.session, option_id, body.raw)
            except UnknownOption as exc:
                return _error(404, "UnknownOption", str(exc))
            except OptionValueError as exc:
                return _error(422, "ValueError", str(exc), option_id=exc.option_id)
            except MutationDuringRun as exc:
                return _error(409, "MutationDuringRun", str(exc))
            return _option_record(state.session, option_id)

    @app.delete("/api/options/{option_id}/value")
    def delete_value(option_id: str):
        with state.lock:
            try:
                state.session = model.clear_option(state.session, option_id)
            except UnknownOption as exc:
                return _error(404, "UnknownOption", str(exc))
            except MutationDuringRun as exc:
                return _error(409, "MutationDuringRun", str(exc))
            return _option_record(state.session, option_id)

    @app.post("/api/reset")
    def reset():
        with state.lock:
            try:
                state.session = model.reset_all(state.session)
            except MutationDuringRun as exc:
                return _error(409, "MutationDuringRun", str(exc))
            return _session_resource(state)

    @app.get("/api/preview")
    def preview():
        session = state.session
        return {"text": preview_text(session), "missing": unmet_required(session)}

    @app.post("/api/run")
    def run():
        with state.lock:
            session = state.session
            if session.active_run is not None:
                return _error(409, "RunAlreadyActive", "a run is already active")
            missing = unmet_required(session)
            if missing:
                return _error(409, "MissingRequired",
                              "missing required options", missing=missing)
            command = assemble(session)
            hub = RunEventHub()

            def sink(chunk: runner.OutputChunk) -> None:
                hub.publish({
                    "type": "chunk",
                    "stream": chunk.stream,
                    "seq": chunk.seq,
                    "text": chunk.data.decode("utf-8", errors="replace"),
                    "b64": base64.b64encode(chunk.data).decode("ascii"),
                })

            def on_exit(record: RunRecord) -> None:
                with state.lock:
                    state.session = model.without_active_run(state.session)
                hub.publish({
                    "type": "status",
                    "status": record.status,
                    "code": record.exit_code,
                    "error_notification": record.error_notification,
                }, final=True)

            try:
                record = runner.start_run(command, sink=sink, session=session,
                                          on_exit=on_exit)
            except (ExecutableNotFound, InputFileMissing, SpawnFailed) as exc:
                return _error(409, type(exc).__name__, str(exc))
            state.runs[record.run_id] = (record, hub)
            state.session = model.with_active_run(state.session, record.run_id)
            hub.publish({"type": "status", "status": runner.RUNNING, "code": None,
                         "error_notification": False})
            return {"run_id": record.run_id}

    def _get_run(run_id: str):
        return state.runs.get(run_id)

    @app.post("/api/runs/{run_id}/kill")
    def kill(run_id: str):
        entry = _get_run(run_id)
        if entry is None:
            return _error(404, "UnknownRun", f"no run {run_id}")
        record, _ = entry
        try:
            runner.kill_run(record)
        except AlreadyTerminated as exc:
            return _error(409, "AlreadyTerminated", str(exc))
        return {"status": record.status}

    @app.get("/api/runs/{run_id}/events")
    def events(run_id: str, start: int = 0):
        entry = _get_run(run_id)
        if entry is None:
            return _error(404, "UnknownRun", f"no run {run_id}")
        _, hub = entry

        def stream():
            for event in hub.subscribe(start):
                yield f"data: {json.dumps(event)}\n\n"

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/api/runs/{run_id}/output")
    def output(run_id: str, stream: str = "stdout"):
        entry = _get_run(run_id)
        if entry is None:
            return _error(404, "UnknownRun", f"no run {run_id}")
        if stream not in (runner.STDOUT, runner.STDERR):
            return _error(422, "BadStream", f"stream must be stdout or stderr, got {stream!r}")
        record, _ = entry
        return Response(content=record.stream_bytes(stream),
                        media_type="application/octet-stream")

    @app.get("/api/runs/{run_id}/status")
    def run_status(run_id: str):
        entry = _get_run(run_id)
        if entry is None:
            return _error(404, "UnknownRun", f"no run {run_id}")
        record, _ = entry
        return {"status": record.status, "code": record.exit_code,
                "error_notification": record.error_notification}

    @app.get("/api/spec/export")
    def export():
        session = state.session
        doc = specxml.attach_values(state.doc, session)
        return Response(content=specxml.serialize_spec(doc),
                        media_type="application/xml")

    @app.get("/api/doc/{option_id}")
    def option_doc(option_id: str):
        try:
            opt = state.session.spec.find(option_id)
        except UnknownOption as exc:
            return _error(404, "UnknownOption", str(exc))
        return {"doc": opt.doc}

    if frontend_dir and os.path.isdir(frontend_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app


def serve(spec_path: str, port: int = 8750, cwd: Optional[str] = None,
          frontend_dir: Optional[str] = None) -> None:
    import uvicorn

    try:
        app = create_app(spec_path, cwd=cwd, frontend_dir=frontend_dir)
    except Exception as exc:
        print(f"failed to load spec: {exc}", file=sys.stderr)
        raise
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
