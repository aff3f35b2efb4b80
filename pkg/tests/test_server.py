"""HTTP endpoints over the session service."""

import pytest
from fastapi.testclient import TestClient

from mumnim.server import create_app


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "sessions")
    with TestClient(app) as c:
        yield c


def create_numeric(client, heaps, modulus=5, **extra):
    body = {"variant": "numeric", "heaps": heaps, "modulus": modulus, **extra}
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 201, resp.text
    return resp.json()["session"]


def create_poly(client, heaps, **extra):
    body = {
        "variant": "poly",
        "heaps": heaps,
        "field": {"p": 2, "n": 3, "modulus": 0b1011},
        **extra,
    }
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 201, resp.text
    return resp.json()["session"]


def test_healthz(client):
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_create_session_payload(client):
    sess = create_numeric(client, [8, 9, 11])
    assert sess["variant"] == "numeric"
    assert sess["modulus"] == 5
    assert sess["heaps"] == [8, 9, 11]
    assert sess["players"] == ["human", "engine"]
    assert sess["playerToMove"] == "human"
    assert sess["status"] == "in_progress"
    assert sess["analysis"]["outcome"] == "N"
    assert {"type": "reduce", "heapIndex": 0, "amount": 1} in sess["legalMoves"]


def test_create_rejects_missing_parameters(client):
    resp = client.post("/sessions", json={"variant": "numeric", "heaps": [2]})
    assert resp.status_code == 422
    assert "modulus" in resp.json()["detail"]
    resp = client.post("/sessions", json={"variant": "poly", "heaps": [2]})
    assert resp.status_code == 422
    assert "field" in resp.json()["detail"]


def test_create_rejects_rule_violations(client):
    resp = client.post(
        "/sessions", json={"variant": "numeric", "heaps": [5], "modulus": 5}
    )
    assert resp.status_code == 422
    assert "not coprime" in resp.json()["detail"]
    resp = client.post(
        "/sessions",
        json={"variant": "poly", "heaps": [9], "field": {"p": 2, "n": 3, "modulus": 0b1011}},
    )
    assert resp.status_code == 422
    resp = client.post(
        "/sessions",
        json={"variant": "poly", "heaps": [3], "field": {"p": 2, "n": 3, "modulus": 0b1001}},
    )
    assert resp.status_code == 422  # x^3+1 is reducible


def test_get_session_and_404(client):
    sess = create_numeric(client, [8, 9, 11])
    resp = client.get(f"/sessions/{sess['id']}")
    assert resp.status_code == 200
    assert resp.json()["session"]["id"] == sess["id"]
    resp = client.get("/sessions/nonexistent")
    assert resp.status_code == 404
    assert resp.json()["detail"] == "unknown session"


def test_list_moves(client):
    sess = create_numeric(client, [2, 2], opponent="human")
    resp = client.get(f"/sessions/{sess['id']}/moves")
    assert resp.status_code == 200
    moves = resp.json()["moves"]
    assert {"type": "reduce", "heapIndex": 0, "amount": 1} in moves
    assert {"type": "consolidate_reduce", "amount": 3} in moves


def test_play_move_with_engine_reply(client):
    sess = create_numeric(client, [8, 9, 11])
    resp = client.post(
        f"/sessions/{sess['id']}/moves",
        json={"move": {"type": "reduce", "heapIndex": 0, "amount": 1}},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert [e["player"] for e in body["applied"]] == ["human", "engine"]
    assert body["session"]["playerToMove"] == "human"
    # the engine answered the human's non-winning move with product 1
    assert body["session"]["analysis"]["product"] == 1


def test_play_move_rejects_illegal(client):
    sess = create_numeric(client, [8, 9, 11])
    resp = client.post(
        f"/sessions/{sess['id']}/moves",
        json={"move": {"type": "reduce", "heapIndex": 0, "amount": 3}},
    )
    assert resp.status_code == 422
    assert "shares a factor" in resp.json()["detail"]
    resp = client.post(
        f"/sessions/{sess['id']}/moves",
        json={"move": {"type": "reduce", "heapIndex": 9, "amount": 1}},
    )
    assert resp.status_code == 422
    resp = client.post(
        f"/sessions/{sess['id']}/moves",
        json={"move": {"type": "warp", "amount": 1}},
    )
    assert resp.status_code == 422  # rejected by the request model


def test_turn_and_game_over_conflicts(client):
    sess = create_numeric(client, [8, 9], firstPlayer="engine")
    resp = client.post(
        f"/sessions/{sess['id']}/moves",
        json={"move": {"type": "reduce", "heapIndex": 0, "amount": 1}},
    )
    assert resp.status_code == 409

    sess = create_numeric(client, [2, 2], opponent="human")
    resp = client.post(
        f"/sessions/{sess['id']}/moves",
        json={"move": {"type": "consolidate_reduce", "amount": 3}},
    )
    assert resp.status_code == 200
    assert resp.json()["session"]["status"] == "won"
    assert resp.json()["session"]["winner"] == "player1"
    resp = client.post(
        f"/sessions/{sess['id']}/moves",
        json={"move": {"type": "reduce", "heapIndex": 0, "amount": 1}},
    )
    assert resp.status_code == 409


def test_ai_move_endpoint(client):
    sess = create_numeric(client, [8, 9], firstPlayer="engine")
    resp = client.post(f"/sessions/{sess['id']}/ai-move")
    assert resp.status_code == 200
    body = resp.json()
    assert [e["player"] for e in body["applied"]] == ["engine"]
    assert body["session"]["playerToMove"] == "human"
    resp = client.post(f"/sessions/{sess['id']}/ai-move")
    assert resp.status_code == 409


def test_hint_endpoint(client):
    sess = create_numeric(client, [2, 2], opponent="human")
    resp = client.get(f"/sessions/{sess['id']}/hint")
    assert resp.status_code == 200
    body = resp.json()
    assert body["move"] == {"type": "consolidate_reduce", "amount": 3}
    assert body["explanation"]["kind"] == "compound"

    sess = create_numeric(client, [2, 3, 6], opponent="human")
    body = client.get(f"/sessions/{sess['id']}/hint").json()
    assert body["move"] is None
    assert body["explanation"]["kind"] == "losing"


def test_analysis_endpoint_with_preview(client):
    sess = create_numeric(client, [2, 3, 6], opponent="human")
    resp = client.get(f"/sessions/{sess['id']}/analysis")
    assert resp.status_code == 200
    assert resp.json()["analysis"]["outcome"] == "P"

    resp = client.get(
        f"/sessions/{sess['id']}/analysis",
        params={"type": "reduce", "heapIndex": 0, "amount": 1},
    )
    assert resp.status_code == 200
    view = resp.json()["analysis"]
    assert view["heaps"] == [1, 3, 6]
    assert view["outcome"] == "N"
    # preview is scratch work; the session is untouched
    resp = client.get(f"/sessions/{sess['id']}")
    assert resp.json()["session"]["heaps"] == [2, 3, 6]


def test_analysis_preview_validation(client):
    sess = create_numeric(client, [2, 3, 6], opponent="human")
    resp = client.get(
        f"/sessions/{sess['id']}/analysis", params={"type": "reduce", "heapIndex": 0}
    )
    assert resp.status_code == 422
    assert "amount" in resp.json()["detail"]
    resp = client.get(
        f"/sessions/{sess['id']}/analysis",
        params={"type": "reduce", "heapIndex": 0, "amount": 4},
    )
    assert resp.status_code == 422


def test_composite_modulus_analysis_fields(client):
    sess = create_numeric(client, [11, 11, 16], modulus=15, opponent="human")
    view = sess["analysis"]
    assert view["stateVector"] == {"factors": [3, 5], "components": [1, 1]}
    assert view["outcome"] == "P"
    assert view["heapDetails"][2]["factorResidues"] == [1, 1]


def test_poly_session_over_http(client):
    sess = create_poly(client, [7, 7])
    view = sess["analysis"]
    assert view["field"]["modulusPolynomial"] == "x^3+x+1"
    assert view["outcome"] == "N"
    hint = client.get(f"/sessions/{sess['id']}/hint").json()
    assert hint["move"]["type"] == "reduce"
    resp = client.post(f"/sessions/{sess['id']}/moves", json={"move": hint["move"]})
    assert resp.status_code == 200
    # the hint reached product 1, so the engine reply cannot restore it
    assert resp.json()["session"]["analysis"]["product"] != 1


def test_sessions_persist_across_app_instances(tmp_path):
    store = tmp_path / "sessions"
    with TestClient(create_app(store)) as c:
        sess = create_numeric(c, [8, 9, 11])
        c.post(
            f"/sessions/{sess['id']}/moves",
            json={"move": {"type": "reduce", "heapIndex": 0, "amount": 1}},
        )
        heaps = c.get(f"/sessions/{sess['id']}").json()["session"]["heaps"]
    with TestClient(create_app(store)) as c:
        reloaded = c.get(f"/sessions/{sess['id']}").json()["session"]
        assert reloaded["heaps"] == heaps
        assert len(reloaded["history"]) == 2


def test_static_ui_mount(tmp_path):
    static = tmp_path / "dist"
    static.mkdir()
    (static / "index.html").write_text("<!doctype html><p>mum</p>")
    with TestClient(create_app(tmp_path / "sessions", static_dir=static)) as c:
        resp = c.get("/")
        assert resp.status_code == 200
        assert "mum" in resp.text
        assert c.get("/healthz").json() == {"status": "ok"}
