"""Session-oriented HTTP API over the engine, plus asset and UI serving."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse
from starlette.concurrency import run_in_threadpool
from starlette.staticfiles import StaticFiles

from ..audio import decode_wav
from ..engine import Engine
from ..errors import DecodeError, TurnError
from ..handler import Session
from .sessions import CapacityError, SessionBusy, SessionNotFound, SessionStore

# Example inputs surfaced to the UI as prompt chips, one per supported task.
SUGGESTIONS = (
    "Generate a rock music with guitar and drums.",
    "Generate a rock music with guitar based on this drum pattern.",
    'Generate a music loop feels like "Hey Jude".',
    "Rearrange this music to jazz with sax solo.",
    "Generate a music loop sounds like this music.",
    "Add a saxophone solo to this music loop.",
    "Remove the guitar from this music loop.",
    "Re-generate the 3-5s part of the music loop.",
    "Add some reverb to the guitar solo.",
    "Transpose this music to G major.",
    "Make the music a bit quicker / slower.",
    "Describe the current music loop.",
)


def _turn_payload(session: Session, turn) -> dict:
    return {
        "turn_index": len(session.history),
        "query": turn.query,
        "answer": turn.answer,
        "produced_assets": [a.relative_path for a in turn.produced_assets],
        "steps": [
            {
                "thought": step.thought,
                "action": step.action,
                "action_input": step.action_input,
                "observation": obs.text,
            }
            for step, obs in turn.steps
        ],
        "gat": session.gat.to_dict(),
    }


def create_app(engine: Engine, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="loopsmith", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = SessionStore(
        engine, max_sessions=engine.config.max_sessions, idle_ttl_s=engine.config.session_idle_ttl_s
    )
    app.state.engine = engine
    app.state.sessions = store

    @app.exception_handler(SessionNotFound)
    async def _not_found(request: Request, exc: SessionNotFound):
        return JSONResponse({"error": str(exc)}, status_code=404)

    @app.exception_handler(SessionBusy)
    async def _busy(request: Request, exc: SessionBusy):
        return JSONResponse({"error": str(exc)}, status_code=409)

    @app.exception_handler(CapacityError)
    async def _capacity(request: Request, exc: CapacityError):
        return JSONResponse({"error": str(exc)}, status_code=503)

    @app.post("/api/sessions")
    def create_session():
        session = store.create()
        return {"session_id": session.id}

    @app.get("/api/sessions/{session_id}/state")
    def get_state(session_id: str):
        session = store.get(session_id)
        return {
            "session_id": session.id,
            "gat": session.gat.to_dict(),
            "history": [
                {
                    "index": i + 1,
                    "query": t.query,
                    "answer": t.answer,
                    "produced_assets": [a.relative_path for a in t.produced_assets],
                }
                for i, t in enumerate(session.history.turns)
            ],
        }

    @app.get("/api/sessions/{session_id}/history")
    def get_history(session_id: str):
        session = store.get(session_id)
        return {
            "session_id": session.id,
            "turns": [
                {
                    "index": i + 1,
                    "query": t.query,
                    "answer": t.answer,
                    "produced_assets": [a.relative_path for a in t.produced_assets],
                    "steps": [
                        {
                            "thought": s.thought,
                            "action": s.action,
                            "action_input": s.action_input,
                            "observation": o.text,
                        }
                        for s, o in t.steps
                    ],
                }
                for i, t in enumerate(session.history.turns)
            ],
        }

    @app.get("/api/sessions/{session_id}/status")
    def get_status(session_id: str):
        busy = store.is_busy(session_id)
        session = store.get(session_id)
        return {"busy": busy, "turns": len(session.history)}

    def _run_turn(session_id: str, text: str, audio_bytes: bytes | None) -> dict:
        session = store.acquire(session_id)
        try:
            attached = None
            if audio_bytes:
                try:
                    attached = engine.store.store(decode_wav(audio_bytes))
                except DecodeError as exc:
                    raise TurnError(f"uploaded audio rejected: {exc}") from exc
            turn = engine.handle(session, text, attached)
            return _turn_payload(session, turn)
        finally:
            store.release(session_id)

    @app.post("/api/sessions/{session_id}/messages")
    async def post_message(session_id: str, request: Request):
        content_type = request.headers.get("content-type", "")
        text = None
        audio_bytes = None
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            text = form.get("text")
            upload = form.get("audio")
            if upload is not None and hasattr(upload, "read"):
                audio_bytes = await upload.read()
        else:
            try:
                body = await request.json()
            except Exception:
                raise HTTPException(status_code=400, detail="expected JSON or multipart body")
            text = body.get("text") if isinstance(body, dict) else None
        if not text or not str(text).strip():
            raise HTTPException(status_code=400, detail="message text must be non-empty")

        try:
            return await run_in_threadpool(_run_turn, session_id, str(text), audio_bytes)
        except TurnError as exc:
            return JSONResponse({"error": str(exc)}, status_code=422)

    @app.get("/api/assets/{asset_path:path}")
    def get_asset(asset_path: str):
        # only exact, known relative paths are served; nothing can traverse out
        if not engine.store.contains(asset_path):
            raise HTTPException(status_code=404, detail=f"unknown asset {asset_path}")
        return FileResponse(engine.store.absolute_path(asset_path), media_type="audio/wav")

    @app.get("/api/suggestions")
    def get_suggestions():
        return {"suggestions": list(SUGGESTIONS)}

    ui = ui_dir or engine.config.ui_dir
    if ui and Path(ui).is_dir():
        app.mount("/", StaticFiles(directory=str(ui), html=True), name="ui")

    return app
