"""Session lifecycle, persistence, and engine play."""

import json

import pytest

from mumnim.game import (
    ConsolidateThenReduce,
    ConsolidationPolicy,
    IllegalMove,
    Reduce,
    new_position,
    product_mod,
)
from mumnim.session import (
    GameOver,
    GameSession,
    NotYourTurn,
    SessionNotFound,
    SessionService,
    SessionStore,
    analyze_numeric,
    move_from_doc,
    move_to_doc,
)

STRANDED = ConsolidationPolicy.STRANDED_ONLY

F8_PARAMS = (2, 3, 0b1011)  # F(2^3) with x^3+x+1


def make_service(tmp_path):
    return SessionService(SessionStore(tmp_path / "sessions"))


def test_move_doc_round_trip():
    for mv in (Reduce(2, 5), ConsolidateThenReduce(3)):
        assert move_from_doc(move_to_doc(mv)) == mv
    with pytest.raises(IllegalMove):
        move_from_doc({"type": "reduce", "amount": 1})
    with pytest.raises(IllegalMove):
        move_from_doc({"type": "consolidate_reduce"})
    with pytest.raises(IllegalMove):
        move_from_doc({"type": "teleport", "amount": 1})


def test_create_numeric_session(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [8, 9, 11], modulus=5)
    assert sess.players == ("human", "engine")
    assert sess.player_to_move == "human"
    assert sess.status == "in_progress"
    assert sess.heaps == (8, 9, 11)  # sorted on entry
    assert sess.modulus == 5
    assert svc.get(sess.id) is sess
    assert sess.id in svc.session_ids()


def test_create_rejects_bad_values(tmp_path):
    svc = make_service(tmp_path)
    with pytest.raises(ValueError):
        svc.create("checkers", [8], modulus=5)
    with pytest.raises(ValueError):
        svc.create("numeric", [8], modulus=5, opponent="cat")
    with pytest.raises(ValueError):
        svc.create("numeric", [5], modulus=5)  # shares a factor


def test_unknown_session_id(tmp_path):
    svc = make_service(tmp_path)
    with pytest.raises(SessionNotFound):
        svc.get("missing")
    with pytest.raises(SessionNotFound):
        svc.play_move("missing", Reduce(0, 1))


def test_engine_replies_in_same_call(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [8, 9, 11], modulus=5)
    sess, applied = svc.play_move(sess.id, Reduce(0, 1))
    assert [e["player"] for e in applied] == ["human", "engine"]
    assert sess.player_to_move == "human"
    # engine is never the seat stored out of turn
    assert all(e["heaps"] == sorted(e["heaps"]) for e in applied)


def test_engine_moves_to_losing_position_when_winning(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [2, 3, 6], modulus=5)  # product 36 = 1 mod 5
    # human plays from a losing position; the engine's reply must
    # restore product 1
    sess, applied = svc.play_move(sess.id, Reduce(2, 2))
    heaps = applied[-1]["heaps"]
    assert product_mod(new_position(5, heaps)) == 1


def test_hot_seat_alternates_seats(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [2, 3], modulus=5, opponent="human")
    assert sess.players == ("player1", "player2")
    sess, applied = svc.play_move(sess.id, Reduce(1, 1))
    assert [e["player"] for e in applied] == ["player1"]
    assert sess.player_to_move == "player2"


def test_won_session_rejects_moves(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [2, 3], modulus=5, opponent="human")
    svc.play_move(sess.id, Reduce(1, 1))  # [2,2] stranded for player2
    sess, _ = svc.play_move(sess.id, ConsolidateThenReduce(3))  # to [1]
    assert sess.status == "won"
    assert sess.winner == "player2"
    with pytest.raises(GameOver):
        svc.play_move(sess.id, Reduce(0, 1))
    with pytest.raises(GameOver):
        svc.hint(sess.id)


def test_session_won_at_creation_when_first_player_is_stuck(tmp_path):
    svc = make_service(tmp_path)
    # mod 2 positions never have a legal reduction
    sess = svc.create("numeric", [3, 5], modulus=2, opponent="human")
    assert sess.status == "won"
    assert sess.winner == "player2"


def test_engine_first_via_ai_move(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [8, 9], modulus=5, first_player="engine")
    assert sess.player_to_move == "engine"
    with pytest.raises(NotYourTurn):
        svc.play_move(sess.id, Reduce(0, 1))
    sess, applied = svc.ai_move(sess.id)
    assert [e["player"] for e in applied] == ["engine"]
    assert sess.player_to_move == "human"
    with pytest.raises(NotYourTurn):
        svc.ai_move(sess.id)


def test_poly_session_play(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("poly", [7, 7], field_params=F8_PARAMS)
    assert sess.variant == "poly"
    move, explanation = svc.hint(sess.id)
    assert explanation["kind"] == "direct"
    assert explanation["targetElement"] == 4
    sess, applied = svc.play_move(sess.id, move)
    # hint led to product 1, so the engine was left losing
    assert len(applied) == 2


def test_hint_explanations(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [2, 3, 6], modulus=5, opponent="human")
    move, expl = svc.hint(sess.id)
    assert move is None
    assert expl["kind"] == "losing"

    sess = svc.create("numeric", [8, 9], modulus=5, opponent="human")
    move, expl = svc.hint(sess.id)
    assert isinstance(move, Reduce)
    assert expl["kind"] == "direct"
    assert (expl["coproduct"] * expl["inverse"]) % 5 == 1

    sess = svc.create("numeric", [2, 2], modulus=5, opponent="human")
    move, expl = svc.hint(sess.id)
    assert move == ConsolidateThenReduce(3)
    assert expl["kind"] == "compound"
    assert expl["consolidatedHeap"] == "4"
    assert expl["target"] == "1"


def test_persistence_round_trip(tmp_path):
    store_dir = tmp_path / "sessions"
    svc = SessionService(SessionStore(store_dir))
    sess = svc.create("numeric", [8, 9, 11], modulus=5)
    svc.play_move(sess.id, Reduce(0, 1))
    poly_sess = svc.create("poly", [3, 4], field_params=F8_PARAMS)

    reloaded = SessionService(SessionStore(store_dir))
    copy = reloaded.get(sess.id)
    assert copy.heaps == svc.get(sess.id).heaps
    assert copy.history == svc.get(sess.id).history
    assert copy.policy is STRANDED
    pcopy = reloaded.get(poly_sess.id)
    assert pcopy.field_params == F8_PARAMS
    assert pcopy.position().field.order == 8


def test_corrupt_documents_are_skipped(tmp_path):
    store_dir = tmp_path / "sessions"
    svc = SessionService(SessionStore(store_dir))
    sess = svc.create("numeric", [8, 9], modulus=5)
    (store_dir / "junk.json").write_text("{not json")
    (store_dir / "empty.json").write_text(json.dumps({"note": "no id"}))

    store = SessionStore(store_dir)
    reloaded = SessionService(store)
    assert reloaded.session_ids() == [sess.id]
    assert sorted(store.corrupt) == ["empty.json", "junk.json"]


def test_replay_assertion_catches_divergence(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [8, 9, 11], modulus=5)
    svc.play_move(sess.id, Reduce(0, 1))
    sess.history[-1]["heaps"] = [2, 9, 11]  # tamper with the snapshot
    with pytest.raises(RuntimeError, match="replay diverged"):
        svc._assert_replay(sess)


def test_session_document_shape(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [8, 9, 11], modulus=5)
    doc = sess.to_doc()
    assert doc["variant"] == "numeric"
    assert doc["modulus"] == 5
    assert doc["playerToMove"] == "human"
    assert doc["initialHeaps"] == [8, 9, 11]
    assert GameSession.from_doc(doc).heaps == sess.heaps

    sess = svc.create("poly", [3, 4], field_params=F8_PARAMS)
    doc = sess.to_doc()
    assert doc["field"] == {"p": 2, "n": 3, "modulus": 0b1011}
    assert GameSession.from_doc(doc).field_params == F8_PARAMS


def test_analysis_and_preview(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [2, 3, 6], modulus=5)
    view = svc.analysis(sess.id)
    assert view["outcome"] == "P"
    assert view["product"] == 1
    assert view["productInteger"] == "36"
    assert view["grundy"] == 0
    assert not view["hintAvailable"]
    # what-if preview never mutates the session
    preview = svc.analysis(sess.id, preview=Reduce(0, 1))
    assert preview["heaps"] == [1, 3, 6]
    assert preview["outcome"] == "N"
    assert svc.get(sess.id).heaps == (2, 3, 6)


def test_analysis_composite_modulus_vector(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [11, 11, 16], modulus=15)
    view = svc.analysis(sess.id)
    assert view["stateVector"] == {"factors": [3, 5], "components": [1, 1]}
    assert view["outcome"] == "P"
    assert view["grundy"] is None
    assert view["heapDetails"][0]["factorResidues"] == [2, 1]


def test_analysis_poly_fields(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("poly", [3, 4], field_params=F8_PARAMS)
    view = svc.analysis(sess.id)
    assert view["field"]["modulusPolynomial"] == "x^3+x+1"
    assert view["product"] == 7
    assert view["productPolynomial"] == "x^2+x+1"
    assert view["productPower"] == 5
    assert view["heapDetails"][0] == {"heap": 3, "polynomial": "x+1", "power": 3}
    assert view["stateVector"] is None and view["mumber"] is None


def test_analysis_mumber_degrades_to_null_when_undefined():
    # stranded-only mex saturates here; the view must not raise
    view = analyze_numeric(new_position(7, [2, 3, 5]), STRANDED)
    assert view["mumber"] is None
    assert view["outcome"] == "N"


def test_engine_self_play_always_ends(tmp_path):
    svc = make_service(tmp_path)
    sess = svc.create("numeric", [8, 9, 11], modulus=5, opponent="human")
    moves = 0
    while sess.status == "in_progress" and moves < 200:
        mv, _ = svc.hint(sess.id)
        if mv is None:
            mv = sess.legal_moves()[0]
        sess, _ = svc.play_move(sess.id, mv)
        moves += 1
    assert sess.status == "won"
