"""Admissible deviations: one party's program replaced, everyone else honest.

Every deviation declares its own finite randomness up front so the
analyzer can enumerate it exactly.  "Arbitrary" behaviour is represented
by message transforms, including lookup tables loaded from scenario files.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Any, Callable, Mapping

from .engine import (
    MISSING,
    NONZERO_SEQ,
    PERM,
    SEQ,
    SHARE,
    Party,
    PartyProgram,
    ProtocolSpec,
    jsonable,
)


class AdmissibilityError(ValueError):
    """More than one party deviates."""


class ProtocolMismatch(ValueError):
    """The deviation does not apply to this protocol."""


@dataclass(frozen=True, eq=False)
class Deviation:
    target: Party | None
    program: PartyProgram | None
    label: str
    kind: str = "honest"
    params: dict = field(default_factory=dict)

    @property
    def is_honest(self) -> bool:
        return self.target is None

    def describe(self) -> dict:
        return {
            "target": self.target.name.lower() if self.target else None,
            "kind": self.kind,
            "label": self.label,
            "params": jsonable(self.params),
        }


@dataclass(frozen=True)
class TamperContext:
    """What a transform may look at: the deviating party's own state."""

    round: int
    input: Any
    tape: Any
    extra: Any
    received: Mapping[str, Any]


Transform = Callable[[str, Any, TamperContext], Any]


def honest() -> Deviation:
    return Deviation(None, None, "honest")


def assemble(protocol: ProtocolSpec, *deviations: Deviation) -> dict[Party, PartyProgram]:
    """The three programs of a run; rejects two simultaneous deviations."""
    active = [d for d in deviations if not d.is_honest]
    if len(active) > 1:
        raise AdmissibilityError(
            "at most one party may deviate, got " + ", ".join(d.target.name.lower() for d in active)
        )
    programs = dict(protocol.honest)
    if active:
        programs[active[0].target] = active[0].program
    return programs


def _own_slots(protocol: ProtocolSpec, target: Party) -> list:
    return [s for s in protocol.schedule if s.sender == target]


def message_tamper(
    protocol: ProtocolSpec,
    target,
    transform: Transform,
    extra_tape: tuple | None = None,
    finalize: Callable[[Any, TamperContext], Any] | None = None,
    label: str = "message tamper",
    kind: str = "message_tamper",
    params: dict | None = None,
) -> Deviation:
    """Run ``target``'s honest program, then rewrite each outgoing payload.

    ``transform(slot, honest_payload, ctx)`` returns the payload actually
    sent, or ``MISSING`` to omit it.  ``extra_tape`` adds private
    randomness, visible to the transform as ``ctx.extra``.  ``finalize``
    replaces the party's output computation.
    """
    target = Party.parse(target)
    base = protocol.honest[target]
    extra_space = tuple(extra_tape) if extra_tape is not None else (None,)
    if not extra_space:
        raise ValueError("extra tape space must be nonempty")

    def send(round, inp, tape, received):
        honest_tape, extra = tape
        out = base.send(round, inp, honest_tape, received)
        ctx = TamperContext(round, inp, honest_tape, extra, received)
        new = {}
        for name, payload in out.items():
            value = transform(name, payload, ctx)
            if value is not MISSING:
                new[name] = value
        return new

    def final(inp, tape, received):
        honest_tape, extra = tape
        if finalize is None:
            return base.finalize(inp, honest_tape, received)
        return finalize(inp, TamperContext(0, inp, honest_tape, extra, received))

    program = PartyProgram(
        target, send, final, tuple(product(base.tape_space, extra_space)), label
    )
    return Deviation(target, program, label, kind, dict(params or {}))


def input_substitution(protocol: ProtocolSpec, target, substituted_input, leak_input: bool = False) -> Deviation:
    """Run honestly on another input; optionally output the true input."""
    target = Party.parse(target)
    if target is Party.CHARLIE:
        raise ProtocolMismatch("Charlie has no input to substitute")
    sub = tuple(substituted_input)
    if not protocol.valid_input(target, sub):
        raise ValueError(f"substituted input {jsonable(sub)} is outside the input alphabet")
    base = protocol.honest[target]

    def send(round, inp, tape, received):
        return base.send(round, sub, tape, received)

    def final(inp, tape, received):
        return inp if leak_input else base.finalize(sub, tape, received)

    label = f"{target.name.lower()} substitutes input {jsonable(sub)}"
    program = PartyProgram(target, send, final, base.tape_space, label)
    return Deviation(target, program, label, "input_substitution",
                     {"substituted_input": sub, "leak_input": leak_input})


def uniform_final_share(protocol: ProtocolSpec, target=Party.ALICE) -> Deviation:
    """Replace the last share sent to Charlie by a fresh uniform field element."""
    target = Party.parse(target)
    if protocol.name != "bgw":
        raise ProtocolMismatch("the final-share attack needs the polynomial-sharing protocol")
    slot = {Party.ALICE: "r1", Party.BOB: "r2"}.get(target)
    if slot is None:
        raise ProtocolMismatch("only Alice or Bob send a final share")

    def transform(name, payload, ctx):
        return ctx.extra if name == slot else payload

    return message_tamper(
        protocol, target, transform, extra_tape=protocol.field.elements(),
        label=f"{target.name.lower()} sends a uniform final share",
        kind="uniform_final_share",
    )


def view_leak(protocol: ProtocolSpec, target) -> Deviation:
    """Behave honestly but output the whole view (input, tape, received)."""
    target = Party.parse(target)
    incoming = protocol.incoming(target)

    def finalize(inp, ctx):
        return (inp, ctx.tape, tuple(ctx.received[s.name] for s in incoming))

    return message_tamper(
        protocol, target, lambda name, payload, ctx: payload, finalize=finalize,
        label=f"{target.name.lower()} outputs its view", kind="view_leak",
    )


# -- transforms -------------------------------------------------------------

def identity_transform(name, payload, ctx):
    return payload


def omit(*slots: str) -> Transform:
    def transform(name, payload, ctx):
        return MISSING if name in slots else payload
    return transform


def edit_slot(slot: str, fn: Callable[[Any, TamperContext], Any]) -> Transform:
    def transform(name, payload, ctx):
        return fn(payload, ctx) if name == slot else payload
    return transform


def table_transform(table: Mapping[str, Mapping[Any, Any]]) -> Transform:
    """Look up ``table[slot][honest_payload]``; unlisted payloads pass through."""
    def transform(name, payload, ctx):
        entries = table.get(name)
        if entries is None:
            return payload
        return entries.get(payload, payload)
    return transform


def payload_alphabet(protocol: ProtocolSpec, kind: str) -> tuple:
    """Every well-formed payload of a message kind."""
    F, n = protocol.field, protocol.n
    if kind == SEQ:
        return tuple(product(F.elements(), repeat=n))
    if kind == NONZERO_SEQ:
        return tuple(product(F.nonzero(), repeat=n))
    if kind == PERM:
        return tuple(permutations(range(n)))
    if kind == SHARE:
        return F.elements()
    raise ValueError(kind)


def random_tamper_table(protocol: ProtocolSpec, target, seed: int, p_missing: float = 0.1) -> dict:
    """A seeded random rewrite of every payload the target could honestly send.

    Replacements for sequences are drawn from all of field^n, so a
    nonzero-sequence slot may receive zeros; a fraction ``p_missing`` of
    entries omit the message instead.
    """
    target = Party.parse(target)
    rng = random.Random(seed)
    table = {}
    for slot in _own_slots(protocol, target):
        domain = payload_alphabet(protocol, slot.kind)
        raw = payload_alphabet(protocol, SEQ if slot.kind == NONZERO_SEQ else slot.kind)
        entries = {}
        for honest_payload in domain:
            if rng.random() < p_missing:
                entries[honest_payload] = MISSING
            else:
                entries[honest_payload] = rng.choice(raw)
        table[slot.name] = entries
    return table


def tamper_from_table(protocol: ProtocolSpec, target, table: dict, label: str = "tamper table") -> Deviation:
    return message_tamper(protocol, target, table_transform(table), label=label,
                          params={"table": {k: len(v) for k, v in table.items()}})
