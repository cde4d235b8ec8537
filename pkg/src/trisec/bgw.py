"""Degree-1 polynomial sharing with a degree-2 opening, for quadratic distance.

Alice and Bob share each input symbol with a random line through it,
every party squares the difference of its shares locally, and Charlie
interpolates the resulting degree-2 polynomial at zero.  Inputs are
integer tuples over ``{0, ..., s-1}`` embedded in Z_N by value.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product

import numpy as np

from .engine import SEQ, SHARE, Party, PartyProgram, ProtocolSpec, Slot
from .field import GF, FieldElement, FieldSpec, is_prime


@dataclass(frozen=True)
class BgwParams:
    n: int
    s: int
    N: int
    abscissas: tuple[int, int, int] = (1, 2, 3)

    def __post_init__(self):
        object.__setattr__(self, "abscissas", tuple(int(e) for e in self.abscissas))
        if self.n < 1:
            raise ValueError("sequence length must be >= 1")
        if self.s < 2:
            raise ValueError("alphabet size must be >= 2")
        if not is_prime(self.N):
            raise ValueError(f"modulus {self.N} is not prime")
        bound = self.n * (self.s - 1) ** 2
        if self.N <= bound:
            raise ValueError(f"modulus must exceed n(s-1)^2 = {bound}, got {self.N}")
        if len(self.abscissas) != 3:
            raise ValueError("exactly three evaluation points are needed")
        pts = [e % self.N for e in self.abscissas]
        if 0 in pts or len(set(pts)) != 3:
            raise ValueError(
                f"evaluation points {self.abscissas} must be distinct and nonzero mod {self.N}"
            )

    @property
    def field(self) -> FieldSpec:
        return GF(self.N)


def quadratic_distance(x, y) -> int:
    return sum((a - b) ** 2 for a, b in zip(x, y))


def output_range(n: int, s: int) -> frozenset[int]:
    """Every value the quadratic distance takes, by brute force over differences."""
    diffs = range(-(s - 1), s)
    return frozenset(sum(d * d for d in ds) for ds in product(diffs, repeat=n))


def share(value: FieldElement, coeff: FieldElement, j: FieldElement) -> FieldElement:
    """Evaluate the line ``coeff * j + value``."""
    return coeff * j + value


def local_r_share(p_shares, q_shares) -> FieldElement:
    """``sum_i (p_i - q_i)^2``, the local sample of the product polynomial."""
    if len(p_shares) != len(q_shares):
        raise ValueError("share vectors differ in length")
    acc = None
    for a, b in zip(p_shares, q_shares):
        d = a - b
        acc = d * d if acc is None else acc + d * d
    return acc


def lagrange_weights_at_zero(abscissas, field: FieldSpec) -> tuple[FieldElement, ...]:
    """Weights ``L_j(0)`` so that ``r(0) = sum_j L_j(0) r(e_j)``."""
    pts = [field(e) for e in abscissas]
    out = []
    for j, ej in enumerate(pts):
        num, den = field.one, field.one
        for m, em in enumerate(pts):
            if m != j:
                num = num * (-em)
                den = den * (ej - em)
        out.append(num / den)
    return tuple(out)


def interpolate_r0(r1, r2, r3, abscissas=(1, 2, 3)) -> FieldElement:
    field = r1.spec
    w = lagrange_weights_at_zero(abscissas, field)
    return w[0] * r1 + w[1] * r2 + w[2] * r3


def schedule() -> tuple[Slot, ...]:
    A, B, C = Party.ALICE, Party.BOB, Party.CHARLIE
    return (
        Slot(1, A, B, "p2", SEQ),
        Slot(1, A, C, "p3", SEQ),
        Slot(1, B, A, "q1", SEQ),
        Slot(1, B, C, "q3", SEQ),
        Slot(2, A, C, "r1", SHARE),
        Slot(2, B, C, "r2", SHARE),
    )


class _Programs:
    """Honest party behaviour, closed over the field and evaluation points."""

    def __init__(self, params: BgwParams):
        self.params = params
        F = params.field
        self.F = F
        self.e = tuple(F(e) for e in params.abscissas)
        self.weights = lagrange_weights_at_zero(params.abscissas, F)

    def _shares(self, value, coeffs, j):
        F = self.F
        return tuple(share(F(v), c, j) for v, c in zip(value, coeffs))

    def alice_send(self, round, x, alpha, received):
        e1, e2, e3 = self.e
        if round == 1:
            return {"p2": self._shares(x, alpha, e2), "p3": self._shares(x, alpha, e3)}
        if round == 2:
            return {"r1": local_r_share(self._shares(x, alpha, e1), received["q1"])}
        return {}

    def bob_send(self, round, y, beta, received):
        e1, e2, e3 = self.e
        if round == 1:
            return {"q1": self._shares(y, beta, e1), "q3": self._shares(y, beta, e3)}
        if round == 2:
            return {"r2": local_r_share(received["p2"], self._shares(y, beta, e2))}
        return {}

    def charlie_send(self, round, inp, tape, received):
        return {}

    def charlie_finalize(self, inp, tape, received):
        r3 = local_r_share(received["p3"], received["q3"])
        L1, L2, L3 = self.weights
        return (L1 * received["r1"] + L2 * received["r2"] + L3 * r3).code

    @staticmethod
    def no_output(inp, tape, received):
        return None


def bgw_protocol(params: BgwParams) -> ProtocolSpec:
    F = params.field
    progs = _Programs(params)
    coeffs = tuple(product(F.elements(), repeat=params.n))
    alice = PartyProgram(Party.ALICE, progs.alice_send, progs.no_output, coeffs)
    bob = PartyProgram(Party.BOB, progs.bob_send, progs.no_output, coeffs)
    charlie = PartyProgram(Party.CHARLIE, progs.charlie_send, progs.charlie_finalize)
    alphabet = tuple(product(range(params.s), repeat=params.n))
    proto = ProtocolSpec(
        name="bgw",
        n=params.n,
        field=F,
        schedule=schedule(),
        x_alphabet=alphabet,
        y_alphabet=alphabet,
        f=quadratic_distance,
        honest={Party.ALICE: alice, Party.BOB: bob, Party.CHARLIE: charlie},
        params={"n": params.n, "s": params.s, "N": params.N, "abscissas": list(params.abscissas)},
    )
    proto.batch_outputs = lambda deviation, x, y: batch_output_counts(params, deviation, x, y)
    return proto


def batch_output_counts(params: BgwParams, deviation, x, y) -> Counter | None:
    """Charlie's output counts over every joint tape, computed with numpy.

    Reproduces exactly what engine enumeration would count for the honest
    run, input substitution, and a uniformly random final share; returns
    ``None`` for any other deviation.
    """
    kind = getattr(deviation, "kind", "honest")
    target = getattr(deviation, "target", None)
    if kind == "input_substitution":
        sub = tuple(deviation.params["substituted_input"])
        if target is Party.ALICE:
            x = sub
        else:
            y = sub
        kind = "honest"
    if kind not in ("honest", "uniform_final_share"):
        return None

    N, n = params.N, params.n
    e1, e2, e3 = (e % N for e in params.abscissas)
    L1, L2, L3 = (w.code for w in lagrange_weights_at_zero(params.abscissas, params.field))
    grid = np.array(list(product(range(N), repeat=n)), dtype=np.int64).reshape(-1, n)
    xa = np.asarray(x, dtype=np.int64)
    ya = np.asarray(y, dtype=np.int64)

    def r(e):
        d = ((grid * e + xa) % N)[:, None, :] - ((grid * e + ya) % N)[None, :, :]
        return (d * d).sum(axis=-1) % N

    counts = np.zeros(N, dtype=np.int64)
    if kind == "honest":
        w = (L1 * r(e1) + L2 * r(e2) + L3 * r(e3)) % N
        counts += np.bincount(w.ravel(), minlength=N)
    else:
        if target is Party.ALICE:
            rest, lead = (L2 * r(e2) + L3 * r(e3)) % N, L1
        elif target is Party.BOB:
            rest, lead = (L1 * r(e1) + L3 * r(e3)) % N, L2
        else:
            return None
        hist = np.bincount(rest.ravel(), minlength=N)
        base = np.arange(N)
        for t in range(N):
            np.add.at(counts, (lead * t + base) % N, hist)
    return Counter({int(w): int(c) for w, c in enumerate(counts) if c})
