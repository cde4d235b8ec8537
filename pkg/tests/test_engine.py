import pytest

from trisec.bgw import BgwParams, bgw_protocol
from trisec.engine import (
    MISSING,
    NONZERO_SEQ,
    PARTIES,
    PERM,
    SEQ,
    SHARE,
    BudgetExceeded,
    Party,
    PartyProgram,
    enumerate_tapes,
    run,
    sanitize,
    tape_count,
)
from trisec.field import GF
from trisec.hamdist import HamDistParams, hamdist_protocol, seq

F3 = GF(3)


def test_sanitize_defaults():
    one = (F3.one, F3.one)
    assert sanitize(PERM, MISSING, 2, F3) == (0, 1)
    assert sanitize(PERM, (1, 1), 2, F3) == (0, 1)
    assert sanitize(PERM, (1, 0), 2, F3) == (1, 0)
    assert sanitize(NONZERO_SEQ, seq(F3, (0, 1)), 2, F3) == one
    assert sanitize(SEQ, seq(F3, (0, 1)), 2, F3) == seq(F3, (0, 1))
    assert sanitize(SEQ, seq(F3, (0, 1, 2)), 2, F3) == one
    assert sanitize(SEQ, seq(GF(5), (0, 1)), 2, F3) == one
    assert sanitize(SEQ, "garbage", 2, F3) == one
    assert sanitize(SHARE, MISSING, 2, F3) == F3.zero
    assert sanitize(SHARE, 2, 2, F3) == F3.zero
    assert sanitize(SHARE, F3(2), 2, F3) == F3(2)


def test_sanitize_is_idempotent():
    for kind, payload in [(SEQ, (1, 2)), (NONZERO_SEQ, seq(F3, (0, 2))), (PERM, (3, 0)), (SHARE, None)]:
        once = sanitize(kind, payload, 2, F3)
        assert sanitize(kind, once, 2, F3) == once


def test_tape_counts():
    ham = hamdist_protocol(HamDistParams(2, F3))
    assert tape_count(ham.honest) == 9 * 4 * 2
    # three distinct nonzero points need N >= 5, so the coefficient count is checked at N=5
    bgw = bgw_protocol(BgwParams(2, 2, 5))
    assert tape_count(bgw.honest) == 25 * 25
    with pytest.raises(ValueError):
        BgwParams(2, 2, 3)
    assert len(list(enumerate_tapes(ham.honest))) == 72


def test_budget_guard():
    ham = hamdist_protocol(HamDistParams(2, F3))
    with pytest.raises(BudgetExceeded) as exc:
        enumerate_tapes(ham.honest, budget=71)
    assert exc.value.required == 72


def test_replay_determinism():
    ham = hamdist_protocol(HamDistParams(2, F3))
    x, y = seq(F3, (1, 2)), seq(F3, (0, 2))
    tapes = next(iter(enumerate_tapes(ham.honest)))
    a = run(ham, ham.honest, x, y, tapes)
    b = run(ham, ham.honest, x, y, tapes)
    assert a.to_json(ham) == b.to_json(ham)
    assert a.views == b.views and a.outputs == b.outputs


def test_silent_alice_gives_bob_defaults():
    ham = hamdist_protocol(HamDistParams(2, F3))
    programs = dict(ham.honest)
    base = programs[Party.ALICE]
    programs[Party.ALICE] = PartyProgram(Party.ALICE, lambda r, i, t, rec: {}, base.finalize, base.tape_space)
    x, y = seq(F3, (1, 2)), seq(F3, (1, 2))
    rec = run(ham, programs, x, y, next(iter(enumerate_tapes(programs))))
    _, _, bob_received = rec.views[1]
    assert bob_received == (seq(F3, (1, 1)), seq(F3, (1, 1)), (0, 1))
    assert all(rec.sent[s] is MISSING for s in ("R", "Z", "pi", "A"))
    # defaults are valid, so the run still completes with an integer output
    assert isinstance(rec.W, int)


def test_unscheduled_messages_are_dropped():
    ham = hamdist_protocol(HamDistParams(2, F3))
    programs = dict(ham.honest)
    base = programs[Party.CHARLIE]
    programs[Party.CHARLIE] = PartyProgram(
        Party.CHARLIE, lambda r, i, t, rec: {"shout": 1}, base.finalize, base.tape_space
    )
    x = y = seq(F3, (0, 0))
    rec = run(ham, programs, x, y, next(iter(enumerate_tapes(programs))))
    assert rec.dropped == [(1, Party.CHARLIE, "shout"), (2, Party.CHARLIE, "shout")]
    assert rec.W == 0


def test_transcript_json_shape():
    ham = hamdist_protocol(HamDistParams(2, F3))
    rec = run(ham, ham.honest, seq(F3, (0, 1)), seq(F3, (0, 2)), next(iter(enumerate_tapes(ham.honest))))
    doc = rec.to_json(ham)
    assert [r["round"] for r in doc["rounds"]] == [1, 2]
    assert doc["outputs"] == {"U": None, "V": None, "W": 1}
    assert set(doc["tapes"]) == {p.name.lower() for p in PARTIES}


def test_party_parse():
    assert Party.parse("alice") is Party.ALICE
    assert Party.parse(3) is Party.CHARLIE
    with pytest.raises(ValueError):
        Party.parse("dave")
