"""HTTP boundary over SessionService.

Sessions are capability-addressed by unguessable ids; there is no
authentication.  Error mapping: unknown session 404, out-of-turn or
finished-game mutations 409, rule violations and malformed positions
422 with the violated condition in `detail`.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .game import ConsolidationPolicy
from .session import (
    GameOver,
    GameSession,
    NotYourTurn,
    SessionNotFound,
    SessionService,
    SessionStore,
    move_from_doc,
    move_to_doc,
)


class FieldParams(BaseModel):
    p: int
    n: int
    modulus: int  # reduction polynomial, base-p digits as an integer


class CreateSessionRequest(BaseModel):
    variant: Literal["numeric", "poly"] = "numeric"
    heaps: list[int]
    modulus: Optional[int] = None
    field: Optional[FieldParams] = None
    opponent: Literal["engine", "human"] = "engine"
    policy: Literal["stranded-only", "always"] = "stranded-only"
    firstPlayer: Literal["human", "engine"] = "human"


class MoveDoc(BaseModel):
    type: Literal["reduce", "consolidate_reduce"]
    amount: int
    heapIndex: Optional[int] = None

    def to_action(self):
        return move_from_doc(self.model_dump())


class PlayMoveRequest(BaseModel):
    move: MoveDoc


def _session_payload(service: SessionService, sess: GameSession) -> dict:
    doc = sess.to_doc()
    doc["legalMoves"] = [move_to_doc(mv) for mv in sess.legal_moves()]
    doc["analysis"] = service.analysis(sess.id)
    return doc


def create_app(store_dir, static_dir=None) -> FastAPI:
    app = FastAPI(title="mum engine")
    service = SessionService(SessionStore(store_dir))
    app.state.service = service

    @app.exception_handler(SessionNotFound)
    async def _not_found(request: Request, exc: SessionNotFound):
        return JSONResponse(status_code=404, content={"detail": "unknown session"})

    @app.exception_handler(NotYourTurn)
    async def _not_your_turn(request: Request, exc: NotYourTurn):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(GameOver)
    async def _game_over(request: Request, exc: GameOver):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _rule_violation(request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def create_session(req: CreateSessionRequest):
        if req.variant == "numeric":
            if req.modulus is None:
                raise ValueError("numeric sessions need a modulus")
            field_params = None
        else:
            if req.field is None:
                raise ValueError("poly sessions need field parameters")
            field_params = (req.field.p, req.field.n, req.field.modulus)
        sess = service.create(
            variant=req.variant,
            heaps=req.heaps,
            opponent=req.opponent,
            policy=ConsolidationPolicy(req.policy),
            modulus=req.modulus,
            field_params=field_params,
            first_player=req.firstPlayer,
        )
        return {"session": _session_payload(service, sess)}

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        sess = service.get(session_id)
        return {"session": _session_payload(service, sess)}

    @app.get("/sessions/{session_id}/moves")
    async def list_moves(session_id: str):
        sess = service.get(session_id)
        return {"moves": [move_to_doc(mv) for mv in sess.legal_moves()]}

    @app.post("/sessions/{session_id}/moves")
    async def play_move(session_id: str, req: PlayMoveRequest):
        sess, applied = service.play_move(session_id, req.move.to_action())
        return {"session": _session_payload(service, sess), "applied": applied}

    @app.post("/sessions/{session_id}/ai-move")
    async def ai_move(session_id: str):
        sess, applied = service.ai_move(session_id)
        return {"session": _session_payload(service, sess), "applied": applied}

    @app.get("/sessions/{session_id}/hint")
    async def hint(session_id: str):
        move, explanation = service.hint(session_id)
        return {
            "move": None if move is None else move_to_doc(move),
            "explanation": explanation,
        }

    @app.get("/sessions/{session_id}/analysis")
    async def analysis(
        session_id: str,
        type: Optional[str] = Query(default=None),
        heapIndex: Optional[int] = Query(default=None),
        amount: Optional[int] = Query(default=None),
    ):
        preview = None
        if type is not None:
            if amount is None:
                raise ValueError("a move preview needs an amount")
            doc = {"type": type, "amount": amount}
            if heapIndex is not None:
                doc["heapIndex"] = heapIndex
            preview = move_from_doc(doc)
        return {"analysis": service.analysis(session_id, preview)}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
