"""Persisted play sessions for both game variants.

A session is one JSON document on disk, rewritten atomically after each
mutation.  Seats are named strings; when one seat is the engine it
replies automatically after the human's move.  Normal play: whoever
made the last move wins when the opponent has no legal reply, so a
session ends the moment the mover-to-be has no moves.

History snapshots are authoritative: replaying every recorded move from
the initial heaps must reproduce the current heaps, and the service
asserts this after every mutation.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import lru_cache
from pathlib import Path
from typing import Optional, Union

from . import crt, game, grundy, poly
from .game import ConsolidateThenReduce, ConsolidationPolicy, Outcome, Reduce
from .modular import SetSaturated, factor_prime_powers, is_prime, mod_inverse

MoveAction = Union[Reduce, ConsolidateThenReduce]

# Mumber search is best-effort in analysis responses; anything larger
# than this many expanded positions reports null instead of stalling.
ANALYSIS_MUMBER_BUDGET = 200_000


class SessionNotFound(KeyError):
    """Unknown or unloadable session id."""


class NotYourTurn(RuntimeError):
    """A seat tried to move out of turn."""


class GameOver(RuntimeError):
    """A mutation was attempted on a finished session."""


@lru_cache(maxsize=32)
def _field_for(p: int, n: int, modulus_int: int) -> poly.FieldSpec:
    return poly.field_from_int(p, n, modulus_int)


def move_to_doc(move: MoveAction) -> dict:
    if isinstance(move, Reduce):
        return {"type": "reduce", "heapIndex": move.heap_index, "amount": move.amount}
    return {"type": "consolidate_reduce", "amount": move.amount}


def move_from_doc(doc: dict) -> MoveAction:
    kind = doc.get("type")
    if kind == "reduce":
        if doc.get("heapIndex") is None or doc.get("amount") is None:
            raise game.IllegalMove("reduce moves need heapIndex and amount")
        return Reduce(int(doc["heapIndex"]), int(doc["amount"]))
    if kind == "consolidate_reduce":
        if doc.get("amount") is None:
            raise game.IllegalMove("consolidate_reduce moves need an amount")
        return ConsolidateThenReduce(int(doc["amount"]))
    raise game.IllegalMove(f"unknown move type {kind!r}")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class GameSession:
    id: str
    variant: str  # "numeric" | "poly"
    policy: ConsolidationPolicy
    players: tuple[str, str]
    player_to_move: str
    status: str  # "in_progress" | "won"
    winner: Optional[str]
    initial_heaps: tuple[int, ...]
    history: list[dict] = field(default_factory=list)
    created_at: str = ""
    updated_at: str = ""
    modulus: Optional[int] = None
    field_params: Optional[tuple[int, int, int]] = None  # (p, n, modulus int)

    @property
    def heaps(self) -> tuple[int, ...]:
        if self.history:
            return tuple(self.history[-1]["heaps"])
        return self.initial_heaps

    def position(self, heaps: Optional[tuple[int, ...]] = None):
        hs = self.heaps if heaps is None else heaps
        if self.variant == "numeric":
            return game.NumPosition(self.modulus, hs)
        return poly.PolyPosition(_field_for(*self.field_params), hs)

    def legal_moves(self) -> list[MoveAction]:
        pos = self.position()
        if self.variant == "numeric":
            return game.legal_moves(pos, self.policy)
        return poly.legal_moves_poly(pos, self.policy)

    def apply(self, pos, move: MoveAction):
        if self.variant == "numeric":
            return game.apply_move(pos, move, self.policy)
        return poly.apply_move_poly(pos, move, self.policy)

    def other_seat(self, seat: str) -> str:
        return self.players[1] if seat == self.players[0] else self.players[0]

    def to_doc(self) -> dict:
        doc = {
            "id": self.id,
            "variant": self.variant,
            "policy": self.policy.value,
            "players": list(self.players),
            "playerToMove": self.player_to_move,
            "status": self.status,
            "winner": self.winner,
            "initialHeaps": list(self.initial_heaps),
            "heaps": list(self.heaps),
            "history": self.history,
            "createdAt": self.created_at,
            "updatedAt": self.updated_at,
        }
        if self.variant == "numeric":
            doc["modulus"] = self.modulus
        else:
            p, n, mod_int = self.field_params
            doc["field"] = {"p": p, "n": n, "modulus": mod_int}
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "GameSession":
        variant = doc["variant"]
        field_params = None
        modulus = None
        if variant == "numeric":
            modulus = int(doc["modulus"])
        else:
            f = doc["field"]
            field_params = (int(f["p"]), int(f["n"]), int(f["modulus"]))
        return cls(
            id=doc["id"],
            variant=variant,
            policy=ConsolidationPolicy(doc["policy"]),
            players=tuple(doc["players"]),
            player_to_move=doc["playerToMove"],
            status=doc["status"],
            winner=doc.get("winner"),
            initial_heaps=tuple(doc["initialHeaps"]),
            history=list(doc.get("history", [])),
            created_at=doc.get("createdAt", ""),
            updated_at=doc.get("updatedAt", ""),
            modulus=modulus,
            field_params=field_params,
        )


class SessionStore:
    """One JSON file per session under one directory.

    Writes go to a temp file in the same directory and are renamed into
    place, so readers never observe a torn document.  Corrupt documents
    are skipped on load and reported in `corrupt`.
    """

    def __init__(self, directory) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.corrupt: list[str] = []

    def _path(self, session_id: str) -> Path:
        return self.directory / f"{session_id}.json"

    def save(self, doc: dict) -> None:
        target = self._path(doc["id"])
        tmp = target.with_name(f".{target.name}.{secrets.token_hex(4)}.tmp")
        tmp.write_text(json.dumps(doc, indent=2) + "\n")
        os.replace(tmp, target)

    def load(self, session_id: str) -> dict:
        path = self._path(session_id)
        if not path.exists():
            raise SessionNotFound(session_id)
        return json.loads(path.read_text())

    def load_all(self) -> list[dict]:
        docs = []
        self.corrupt = []
        for path in sorted(self.directory.glob("*.json")):
            try:
                doc = json.loads(path.read_text())
                if "id" not in doc:
                    raise ValueError("missing id")
                docs.append(doc)
            except (ValueError, OSError):
                self.corrupt.append(path.name)
        return docs


def _seats(opponent: str) -> tuple[str, str]:
    if opponent == "engine":
        return ("human", "engine")
    return ("player1", "player2")


class SessionService:
    """In-memory registry over a SessionStore; one lock per session so
    concurrent mutations of a session are serialized."""

    def __init__(self, store: SessionStore) -> None:
        self.store = store
        self._sessions: dict[str, GameSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        for doc in store.load_all():
            try:
                sess = GameSession.from_doc(doc)
                sess.position()  # validates heaps against the variant
                self._sessions[sess.id] = sess
            except (ValueError, KeyError):
                store.corrupt.append(f"{doc.get('id', '?')}.json")

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def get(self, session_id: str) -> GameSession:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise SessionNotFound(session_id) from None

    def session_ids(self) -> list[str]:
        return sorted(self._sessions)

    def create(
        self,
        variant: str,
        heaps,
        opponent: str = "engine",
        policy: ConsolidationPolicy = ConsolidationPolicy.STRANDED_ONLY,
        modulus: Optional[int] = None,
        field_params: Optional[tuple[int, int, int]] = None,
        first_player: str = "human",
    ) -> GameSession:
        if variant not in ("numeric", "poly"):
            raise ValueError(f"unknown variant {variant!r}")
        if opponent not in ("engine", "human"):
            raise ValueError(f"unknown opponent {opponent!r}")
        players = _seats(opponent)
        if opponent == "engine" and first_player == "engine":
            to_move = "engine"
        else:
            to_move = players[0]
        now = _now()
        sess = GameSession(
            id=secrets.token_urlsafe(12),
            variant=variant,
            policy=policy,
            players=players,
            player_to_move=to_move,
            status="in_progress",
            winner=None,
            initial_heaps=(),
            created_at=now,
            updated_at=now,
            modulus=modulus,
            field_params=field_params,
        )
        if variant == "numeric":
            pos = game.new_position(modulus, heaps)
        else:
            pos = poly.new_poly_position(_field_for(*field_params), heaps)
        sess.initial_heaps = pos.heaps
        # A first player with no legal moves has already lost.
        if not sess.legal_moves():
            sess.status = "won"
            sess.winner = sess.other_seat(to_move)
        with self._registry_lock:
            self._sessions[sess.id] = sess
            self._locks[sess.id] = threading.Lock()
        self.store.save(sess.to_doc())
        return sess

    def _apply_and_record(self, sess: GameSession, seat: str, move: MoveAction) -> None:
        pos = sess.position()
        new_pos = sess.apply(pos, move)
        sess.history.append(
            {"player": seat, "move": move_to_doc(move), "heaps": list(new_pos.heaps)}
        )
        sess.updated_at = _now()
        sess.player_to_move = sess.other_seat(seat)
        if not sess.legal_moves():
            sess.status = "won"
            sess.winner = seat
        self._assert_replay(sess)

    def _assert_replay(self, sess: GameSession) -> None:
        pos = sess.position(sess.initial_heaps)
        for entry in sess.history:
            pos = sess.apply(pos, move_from_doc(entry["move"]))
        if pos.heaps != sess.heaps:
            raise RuntimeError(f"history replay diverged for session {sess.id}")

    def play_move(self, session_id: str, move: MoveAction) -> tuple[GameSession, list[dict]]:
        """Apply the current (non-engine) seat's move; when the opponent
        is the engine and the game continues, the engine's reply is
        applied in the same call.  Returns the session and the history
        entries appended."""
        with self._lock_for(session_id):
            sess = self.get(session_id)
            if sess.status != "in_progress":
                raise GameOver(f"session {session_id} is finished")
            seat = sess.player_to_move
            if seat == "engine":
                raise NotYourTurn("the engine moves by itself; wait for its reply")
            before = len(sess.history)
            self._apply_and_record(sess, seat, move)
            if (
                sess.status == "in_progress"
                and sess.player_to_move == "engine"
            ):
                self._apply_and_record(sess, "engine", self._engine_choice(sess))
            self.store.save(sess.to_doc())
            return sess, sess.history[before:]

    def ai_move(self, session_id: str) -> tuple[GameSession, list[dict]]:
        """Apply one engine move (used when the engine moves first)."""
        with self._lock_for(session_id):
            sess = self.get(session_id)
            if sess.status != "in_progress":
                raise GameOver(f"session {session_id} is finished")
            if sess.player_to_move != "engine":
                raise NotYourTurn("it is not the engine's turn")
            before = len(sess.history)
            self._apply_and_record(sess, "engine", self._engine_choice(sess))
            self.store.save(sess.to_doc())
            return sess, sess.history[before:]

    def _engine_choice(self, sess: GameSession) -> MoveAction:
        pos = sess.position()
        if sess.variant == "numeric":
            move = game.optimal_move(pos, sess.policy)
        else:
            move = poly.optimal_move_poly(pos, sess.policy)
        if move is not None:
            return move
        # Losing position: deterministic fallback, lowest heap index and
        # smallest amount.
        return sess.legal_moves()[0]

    def hint(self, session_id: str) -> tuple[Optional[MoveAction], dict]:
        sess = self.get(session_id)
        if sess.status != "in_progress":
            raise GameOver(f"session {session_id} is finished")
        pos = sess.position()
        if sess.variant == "numeric":
            move = game.optimal_move(pos, sess.policy)
            return move, self._explain_numeric(pos, move)
        move = poly.optimal_move_poly(pos, sess.policy)
        return move, self._explain_poly(pos, move)

    def _explain_numeric(self, pos, move: Optional[MoveAction]) -> dict:
        m = pos.modulus
        if move is None:
            return {
                "kind": "losing",
                "text": f"product is 1 mod {m}; every legal move hands the opponent a winning position",
            }
        if isinstance(move, Reduce):
            h = pos.heaps[move.heap_index]
            coproduct = 1
            for j, g in enumerate(pos.heaps):
                if j != move.heap_index:
                    coproduct = (coproduct * g) % m
            inv = mod_inverse(coproduct, m)
            return {
                "kind": "direct",
                "heapIndex": move.heap_index,
                "heapValue": str(h),
                "coproduct": coproduct,
                "inverse": inv,
                "targetResidue": inv,
                "amount": move.amount,
                "text": (
                    f"the other heaps multiply to {coproduct} mod {m}, whose inverse is "
                    f"{inv}; subtracting {move.amount} leaves this heap at residue {inv}, "
                    f"making the product 1"
                ),
            }
        h_new = game.full_product(pos)
        return {
            "kind": "compound",
            "consolidatedHeap": str(h_new),
            "amount": move.amount,
            "target": str(h_new - move.amount),
            "text": (
                f"no single reduction reaches product 1, so consolidate the heaps "
                f"into {h_new} and subtract {move.amount} to leave residue 1 mod {m}"
            ),
        }

    def _explain_poly(self, pos, move: Optional[MoveAction]) -> dict:
        fld = pos.field
        if move is None:
            return {
                "kind": "losing",
                "text": "field product is 1; every legal move hands the opponent a winning position",
            }
        prod = poly.field_product(pos)
        if isinstance(move, Reduce):
            h = pos.heaps[move.heap_index]
            inv = poly.field_inv(prod)
            target = h - move.amount
            return {
                "kind": "direct",
                "heapIndex": move.heap_index,
                "heapValue": str(h),
                "productElement": prod.rep,
                "inverseElement": inv.rep,
                "targetElement": target,
                "targetPolynomial": poly.poly_str(poly.FieldElement(target, fld)),
                "amount": move.amount,
                "text": (
                    f"the product is {poly.poly_str(prod)} (rep {prod.rep}); multiplying this "
                    f"heap by the product's inverse gives target {target}, so reduce it by "
                    f"{move.amount} to make the product 1"
                ),
            }
        h_new = prod.rep
        return {
            "kind": "compound",
            "consolidatedHeap": str(h_new),
            "amount": move.amount,
            "target": str(h_new - move.amount),
            "text": (
                f"no single reduction reaches product 1, so consolidate to the canonical "
                f"heap {h_new} and subtract {move.amount} to leave the identity heap 1"
            ),
        }

    def analysis(
        self, session_id: str, preview: Optional[MoveAction] = None
    ) -> dict:
        """AnalysisView of the session position, or of the scratch
        position reached by one candidate move (never mutates)."""
        sess = self.get(session_id)
        pos = sess.position()
        if preview is not None:
            pos = sess.apply(pos, preview)
        if sess.variant == "numeric":
            return analyze_numeric(pos, sess.policy)
        return analyze_poly(pos, sess.policy)


def analyze_numeric(pos, policy: ConsolidationPolicy) -> dict:
    m = pos.modulus
    outcome = game.classify(pos)
    factors = factor_prime_powers(m)
    vector = None
    if len(factors) > 1:
        v = crt.state_vector(pos)
        vector = {
            "factors": [f.value for f in v.factors],
            "components": list(v.components),
        }
    try:
        mumber = {
            "policy": policy.value,
            "value": grundy.mumber_mex(pos, policy, ANALYSIS_MUMBER_BUDGET),
        }
    except (grundy.SearchBudgetExceeded, SetSaturated):
        # too large to value within budget, or the stranded-only
        # recursion has no defined mex here; the view degrades to null
        mumber = None
    prod = game.product_mod(pos)
    return {
        "variant": "numeric",
        "modulus": m,
        "heaps": list(pos.heaps),
        "product": prod,
        "productInteger": str(game.full_product(pos)),
        "outcome": outcome.value,
        "stranded": game.is_stranded(pos),
        "stateVector": vector,
        "mumber": mumber,
        "grundy": (prod - 1) % m if is_prime(m) else None,
        "heapDetails": [
            {
                "heap": h,
                "residue": h % m,
                "factorResidues": [h % f.value for f in factors]
                if len(factors) > 1
                else None,
            }
            for h in pos.heaps
        ],
        "hintAvailable": outcome is Outcome.N_POSITION,
    }


def analyze_poly(pos, policy: ConsolidationPolicy) -> dict:
    fld = pos.field
    prod = poly.field_product(pos)
    outcome = poly.classify_poly(pos)

    def power_of(rep: int) -> Optional[int]:
        if fld.log is None or rep == 0:
            return None
        return fld.log[rep]

    return {
        "variant": "poly",
        "field": {
            "p": fld.p,
            "n": fld.n,
            "modulus": poly.modulus_int(fld),
            "modulusPolynomial": poly.modulus_str(fld),
            "order": fld.order,
        },
        "heaps": list(pos.heaps),
        "product": prod.rep,
        "productPolynomial": poly.poly_str(prod),
        "productPower": power_of(prod.rep),
        "outcome": outcome.value,
        "stranded": poly.is_stranded_poly(pos),
        "stateVector": None,
        "mumber": None,
        "grundy": None,
        "heapDetails": [
            {
                "heap": h,
                "polynomial": poly.poly_str(poly.FieldElement(h, fld)),
                "power": power_of(h),
            }
            for h in pos.heaps
        ],
        "hintAvailable": outcome is Outcome.N_POSITION,
    }
