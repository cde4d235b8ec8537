"""Deterministic three-party execution over pairwise channels.

A protocol is a fixed schedule of message slots.  Each party runs a
:class:`PartyProgram`, a pure function of its input, an explicit random
tape and the messages it has received so far.  Every delivered message
first goes through :func:`sanitize`, so a receiver always sees a
well-formed payload of the kind it expects.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Any, Callable, Iterator, Mapping, Sequence

from .field import FieldElement, FieldSpec

DEFAULT_BUDGET = int(os.environ.get("TRISEC_BUDGET", "2000000"))


class Party(enum.IntEnum):
    ALICE = 1
    BOB = 2
    CHARLIE = 3

    @classmethod
    def parse(cls, name) -> "Party":
        if isinstance(name, Party):
            return name
        if isinstance(name, int):
            try:
                return cls(name)
            except ValueError:
                raise ValueError(f"unknown party {name!r}") from None
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise ValueError(f"unknown party {name!r}") from None


PARTIES = (Party.ALICE, Party.BOB, Party.CHARLIE)


class _Missing:
    __slots__ = ()

    def __repr__(self):
        return "MISSING"

    def __reduce__(self):
        return "MISSING"


MISSING = _Missing()

# message kinds
SEQ = "seq"
NONZERO_SEQ = "nonzero_seq"
PERM = "perm"
SHARE = "share"


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} atoms, budget is {budget}")
        self.required = required
        self.budget = budget


@dataclass(frozen=True)
class Slot:
    round: int
    sender: Party
    receiver: Party
    name: str
    kind: str


@dataclass(frozen=True, eq=False)
class PartyProgram:
    """One party's behaviour.

    ``send(round, input, tape, received)`` returns a dict from slot name to
    payload for the slots this party owns in that round; ``finalize(input,
    tape, received)`` returns the party's output (``None`` for no output).
    The tape is drawn uniformly from ``tape_space``.
    """

    party: Party
    send: Callable[[int, Any, Any, Mapping[str, Any]], dict]
    finalize: Callable[[Any, Any, Mapping[str, Any]], Any]
    tape_space: tuple = ((),)
    label: str = "honest"

    def __post_init__(self):
        if not self.tape_space:
            raise ValueError("tape space must be nonempty")


def _no_messages(round, inp, tape, received):
    return {}


def _no_output(inp, tape, received):
    return None


def silent_program(party: Party) -> PartyProgram:
    return PartyProgram(party, _no_messages, _no_output)


@dataclass(eq=False)
class ProtocolSpec:
    """Everything the engine and analyzer need to know about a protocol."""

    name: str
    n: int
    field: FieldSpec
    schedule: tuple[Slot, ...]
    x_alphabet: tuple
    y_alphabet: tuple
    f: Callable[[Any, Any], int]
    honest: dict[Party, PartyProgram]
    extractors: dict[Party, Callable[["ExecutionRecord"], Any]] = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    # optional vectorised exact evaluator: (deviation, x, y) -> {w: count} or None
    batch_outputs: Callable | None = None

    def __post_init__(self):
        self.rounds = max(s.round for s in self.schedule)
        self._x_set = frozenset(self.x_alphabet)
        self._y_set = frozenset(self.y_alphabet)
        self._outgoing = {}
        for s in self.schedule:
            self._outgoing.setdefault((s.round, s.sender), []).append(s)
        self._incoming = {p: tuple(s for s in self.schedule if s.receiver == p) for p in PARTIES}
        names = [s.name for s in self.schedule]
        if len(set(names)) != len(names):
            raise ValueError("slot names must be unique")
        self._output_range = None

    def slot(self, name: str) -> Slot:
        for s in self.schedule:
            if s.name == name:
                return s
        raise KeyError(name)

    def incoming(self, party: Party) -> tuple[Slot, ...]:
        return self._incoming[party]

    def valid_input(self, party: Party, value) -> bool:
        if party is Party.ALICE:
            return value in self._x_set
        if party is Party.BOB:
            return value in self._y_set
        return value is None

    @property
    def output_range(self) -> frozenset:
        """All values f can take over the input alphabets."""
        if self._output_range is None:
            self._output_range = frozenset(
                self.f(x, y) for x in self.x_alphabet for y in self.y_alphabet
            )
        return self._output_range


def sanitize(kind: str, received, n: int, field: FieldSpec):
    """Return ``received`` if it is a valid ``kind`` payload, else the default.

    Defaults: the all-one sequence for any bad sequence (including a
    nonzero-sequence containing a zero), the identity permutation, and
    field zero for a share.
    """
    if kind == SEQ or kind == NONZERO_SEQ:
        if (
            isinstance(received, (tuple, list))
            and len(received) == n
            and all(isinstance(e, FieldElement) and (e.spec is field or e.spec == field) for e in received)
            and (kind == SEQ or all(e.code != 0 for e in received))
        ):
            return tuple(received)
        return (field.one,) * n
    if kind == PERM:
        if (
            isinstance(received, (tuple, list))
            and len(received) == n
            and all(type(i) is int for i in received)
            and sorted(received) == list(range(n))
        ):
            return tuple(received)
        return tuple(range(n))
    if kind == SHARE:
        if isinstance(received, FieldElement) and (received.spec is field or received.spec == field):
            return received
        return field.zero
    raise ValueError(f"unknown message kind {kind!r}")


@dataclass(eq=False)
class ExecutionRecord:
    x: Any
    y: Any
    tapes: tuple
    sent: dict          # slot name -> payload as emitted (MISSING if omitted)
    delivered: dict     # slot name -> payload after sanitization
    dropped: list       # (round, party, slot name) for unscheduled emissions
    views: tuple        # (M1, M2, M3)
    outputs: tuple      # (U, V, W)

    @property
    def U(self):
        return self.outputs[0]

    @property
    def V(self):
        return self.outputs[1]

    @property
    def W(self):
        return self.outputs[2]

    def to_json(self, protocol: ProtocolSpec) -> dict:
        rounds = []
        for r in range(1, protocol.rounds + 1):
            msgs = []
            for s in protocol.schedule:
                if s.round != r:
                    continue
                msgs.append({
                    "slot": s.name,
                    "from": s.sender.name.lower(),
                    "to": s.receiver.name.lower(),
                    "sent": _loose(self.sent[s.name]),
                    "delivered": jsonable(self.delivered[s.name]),
                    "substituted": self.sent[s.name] is MISSING
                    or _loose(self.sent[s.name]) != _loose(self.delivered[s.name]),
                })
            rounds.append({"round": r, "messages": msgs})
        return {
            "protocol": protocol.name,
            "params": protocol.params,
            "inputs": {"x": jsonable(self.x), "y": jsonable(self.y)},
            "tapes": {p.name.lower(): jsonable(t) for p, t in zip(PARTIES, self.tapes)},
            "rounds": rounds,
            "dropped": [
                {"round": r, "from": p.name.lower(), "slot": name} for r, p, name in self.dropped
            ],
            "outputs": {"U": jsonable(self.U), "V": jsonable(self.V), "W": jsonable(self.W)},
        }


def _loose(value):
    try:
        return jsonable(value)
    except TypeError:
        return repr(value)


def jsonable(value):
    """Canonical JSON-compatible form of any value the engine produces."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, FieldElement):
        return value.to_json()
    if value is MISSING:
        return "<missing>"
    if isinstance(value, enum.Enum):
        return value.name.lower()
    if isinstance(value, (tuple, list)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    raise TypeError(f"cannot serialise {type(value).__name__}")


def run(protocol: ProtocolSpec, programs: Mapping[Party, PartyProgram], x, y, tapes: Sequence) -> ExecutionRecord:
    """Execute one run; a pure function of its arguments."""
    inputs = (x, y, None)
    received = {Party.ALICE: {}, Party.BOB: {}, Party.CHARLIE: {}}
    sent = {}
    delivered = {}
    dropped = []
    n, fld = protocol.n, protocol.field
    outgoing = protocol._outgoing
    for r in range(1, protocol.rounds + 1):
        batch = []
        # synchronous rounds: everyone speaks before anything is delivered
        for p in PARTIES:
            out = programs[p].send(r, inputs[p - 1], tapes[p - 1], received[p])
            slots = outgoing.get((r, p), ())
            for s in slots:
                batch.append((s, out.get(s.name, MISSING) if out else MISSING))
            if out:
                for name in out:
                    if not any(s.name == name for s in slots):
                        dropped.append((r, p, name))
        for s, payload in batch:
            clean = sanitize(s.kind, payload, n, fld)
            sent[s.name] = payload
            delivered[s.name] = clean
            received[s.receiver][s.name] = clean
    views = tuple(
        (inputs[p - 1], tapes[p - 1], tuple(received[p][s.name] for s in protocol._incoming[p]))
        for p in PARTIES
    )
    outputs = tuple(programs[p].finalize(inputs[p - 1], tapes[p - 1], received[p]) for p in PARTIES)
    return ExecutionRecord(x, y, tuple(tapes), sent, delivered, dropped, views, outputs)


def tape_count(programs: Mapping[Party, PartyProgram]) -> int:
    return prod(len(programs[p].tape_space) for p in PARTIES)


def enumerate_tapes(programs: Mapping[Party, PartyProgram], budget: int | None = None) -> Iterator[tuple]:
    """All joint tape assignments, Alice's tape varying slowest."""
    budget = DEFAULT_BUDGET if budget is None else budget
    total = tape_count(programs)
    if total > budget:
        raise BudgetExceeded(total, budget)
    return product(*(programs[p].tape_space for p in PARTIES))
