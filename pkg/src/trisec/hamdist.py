"""Masked-difference protocol for the Hamming distance of field sequences.

Alice samples a uniform mask ``R``, a uniform nonzero scaling ``Z`` and a
uniform permutation ``pi``, hands all three to Bob, and both send Charlie
their half of ``pi(Z * (X - Y))``.  Charlie only learns how many entries
are nonzero.

Permutations are 0-based index tuples.  Applying ``pi`` moves the entry at
position ``i`` to position ``pi[i]``, so output position ``j`` holds input
position ``pi^-1(j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .engine import (
    NONZERO_SEQ,
    PERM,
    SEQ,
    ExecutionRecord,
    Party,
    PartyProgram,
    ProtocolSpec,
    Slot,
)
from .field import FieldElement, FieldSpec, sequences


@dataclass(frozen=True)
class HamDistParams:
    n: int
    field: FieldSpec

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sequence length must be >= 1")
        if self.field.order < 2:
            raise ValueError("field must have at least two elements")


def apply_perm(pi, seq):
    out = [None] * len(seq)
    for i, v in enumerate(seq):
        out[pi[i]] = v
    return tuple(out)


def invert_perm(pi):
    inv = [0] * len(pi)
    for i, j in enumerate(pi):
        inv[j] = i
    return tuple(inv)


def hamming_distance(x, y) -> int:
    return sum(1 for a, b in zip(x, y) if a != b)


def alice_round(x, R, Z, pi):
    """Alice's messages: ``(R, Z, pi)`` for Bob and ``A = pi(Z*(x-R))`` for Charlie."""
    A = apply_perm(pi, tuple(z * (a - r) for a, r, z in zip(x, R, Z)))
    return {"R": R, "Z": Z, "pi": pi, "A": A}


def bob_round(y, R, Z, pi):
    return {"B": apply_perm(pi, tuple(z * (r - b) for b, r, z in zip(y, R, Z)))}


def charlie_finalize(A, B) -> int:
    return sum(1 for a, b in zip(A, B) if (a + b).code != 0)


def extract_alice_input(R, Z, pi, A):
    """Effective input of a deviating Alice: ``R + pi^-1(A) / Z``."""
    unperm = apply_perm(invert_perm(pi), A)
    return tuple(r + a / z for r, a, z in zip(R, unperm, Z))


def extract_bob_input(R, Z, pi, B):
    """Effective input of a deviating Bob: ``R - pi^-1(B) / Z``."""
    unperm = apply_perm(invert_perm(pi), B)
    return tuple(r - b / z for r, b, z in zip(R, unperm, Z))


def alice_tape_space(params: HamDistParams) -> tuple:
    """Every ``(R, Z, pi)``; uniform over it gives the three independent uniforms."""
    return tuple(
        product(
            tuple(sequences(params.field, params.n)),
            tuple(sequences(params.field, params.n, nonzero=True)),
            tuple(permutations(range(params.n))),
        )
    )


def _alice_send(round, x, tape, received):
    if round != 1:
        return {}
    R, Z, pi = tape
    return alice_round(x, R, Z, pi)


def _bob_send(round, y, tape, received):
    if round != 2:
        return {}
    return bob_round(y, received["R"], received["Z"], received["pi"])


def _charlie_send(round, inp, tape, received):
    return {}


def _charlie_finalize(inp, tape, received):
    return charlie_finalize(received["A"], received["B"])


def _no_output(inp, tape, received):
    return None


def _extract_alice(record: ExecutionRecord):
    d = record.delivered
    return extract_alice_input(d["R"], d["Z"], d["pi"], d["A"])


def _extract_bob(record: ExecutionRecord):
    d = record.delivered
    return extract_bob_input(d["R"], d["Z"], d["pi"], d["B"])


def schedule() -> tuple[Slot, ...]:
    A, B, C = Party.ALICE, Party.BOB, Party.CHARLIE
    return (
        Slot(1, A, B, "R", SEQ),
        Slot(1, A, B, "Z", NONZERO_SEQ),
        Slot(1, A, B, "pi", PERM),
        Slot(1, A, C, "A", SEQ),
        Slot(2, B, C, "B", SEQ),
    )


def hamdist_protocol(params: HamDistParams, force_identity_perm: bool = False) -> ProtocolSpec:
    """Build the honest protocol.

    ``force_identity_perm`` is a deliberately broken variant that never
    shuffles positions; it exists as a negative control for the analyzer.
    """
    tapes = alice_tape_space(params)
    label = "honest"
    if force_identity_perm:
        ident = tuple(range(params.n))
        tapes = tuple(t for t in tapes if t[2] == ident)
        label = "identity-permutation"
    alice = PartyProgram(Party.ALICE, _alice_send, _no_output, tapes, label)
    bob = PartyProgram(Party.BOB, _bob_send, _no_output)
    charlie = PartyProgram(Party.CHARLIE, _charlie_send, _charlie_finalize)
    alphabet = tuple(sequences(params.field, params.n))
    return ProtocolSpec(
        name="hamdist",
        n=params.n,
        field=params.field,
        schedule=schedule(),
        x_alphabet=alphabet,
        y_alphabet=alphabet,
        f=hamming_distance,
        honest={Party.ALICE: alice, Party.BOB: bob, Party.CHARLIE: charlie},
        extractors={Party.ALICE: _extract_alice, Party.BOB: _extract_bob},
        params={"n": params.n, "field": params.field.to_config(),
                **({"force_identity_perm": True} if force_identity_perm else {})},
    )


def seq(field: FieldSpec, values) -> tuple[FieldElement, ...]:
    """Shorthand: ``seq(GF(3), [1, 2])``."""
    return tuple(field(v) for v in values)
