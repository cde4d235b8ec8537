from collections import Counter
from itertools import product

import pytest

from trisec.engine import enumerate_tapes, run
from trisec.field import GF
from trisec.hamdist import (
    HamDistParams,
    alice_round,
    apply_perm,
    bob_round,
    charlie_finalize,
    extract_alice_input,
    extract_bob_input,
    hamdist_protocol,
    invert_perm,
    seq,
)

from oracles import hamming

F3 = GF(3)
SWAP = (1, 0)
ID = (0, 1)


def s3(*v):
    return seq(F3, v)


def test_alice_round_examples():
    assert alice_round(s3(1, 2), s3(0, 0), s3(1, 1), ID)["A"] == s3(1, 2)
    assert alice_round(s3(1, 2), s3(2, 1), s3(2, 2), SWAP)["A"] == s3(2, 1)
    assert alice_round(s3(2, 0), s3(2, 0), s3(1, 2), SWAP)["A"] == s3(0, 0)


def test_bob_round_examples():
    assert bob_round(s3(0, 2), s3(2, 1), s3(2, 2), SWAP)["B"] == s3(1, 1)
    assert bob_round(s3(2, 1), s3(2, 1), s3(1, 2), SWAP)["B"] == s3(0, 0)
    R, y = s3(2, 1), s3(0, 2)
    assert bob_round(y, R, s3(1, 1), SWAP)["B"] == apply_perm(SWAP, tuple(r - v for r, v in zip(R, y)))


def test_charlie_examples():
    F2 = GF(2)
    assert charlie_finalize(seq(F2, (1, 1)), seq(F2, (1, 1))) == 0
    assert charlie_finalize(s3(1, 0), s3(2, 0)) == 0
    assert charlie_finalize(s3(1, 0), s3(1, 0)) == 1


def test_extractor_examples():
    assert extract_alice_input(s3(2, 1), s3(2, 2), SWAP, s3(2, 1)) == s3(1, 2)
    assert extract_alice_input(s3(2, 1), s3(2, 2), SWAP, s3(0, 0)) == s3(2, 1)
    assert extract_bob_input(s3(2, 1), s3(2, 2), SWAP, s3(1, 1)) == s3(0, 2)
    assert extract_bob_input(s3(2, 1), s3(2, 2), SWAP, s3(0, 0)) == s3(2, 1)


def test_permutation_helpers():
    for pi in [(2, 0, 1), (1, 2, 0), (0, 2, 1)]:
        v = ("a", "b", "c")
        assert apply_perm(invert_perm(pi), apply_perm(pi, v)) == v
    # position i moves to pi[i]
    assert apply_perm((2, 0, 1), ("a", "b", "c")) == ("b", "c", "a")


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2)])
def test_exhaustive_correctness(p, k):
    F = GF(p, k)
    proto = hamdist_protocol(HamDistParams(2, F))
    tapes = list(enumerate_tapes(proto.honest))
    for x, y in product(proto.x_alphabet, repeat=2):
        for t in tapes:
            rec = run(proto, proto.honest, x, y, t)
            assert rec.outputs == (None, None, hamming(x, y))


def test_extractors_invert_honest_messages():
    proto = hamdist_protocol(HamDistParams(2, F3))
    for x, y in product(proto.x_alphabet, repeat=2):
        for t in enumerate_tapes(proto.honest):
            rec = run(proto, proto.honest, x, y, t)
            assert proto.extractors[1](rec) == x
            assert proto.extractors[2](rec) == y


def test_mask_is_uniform_for_every_input():
    # A is a one-time pad: its law over Alice's tape does not depend on x
    params = HamDistParams(2, F3)
    proto = hamdist_protocol(params)
    laws = set()
    for x in proto.x_alphabet:
        c = Counter(alice_round(x, *t)["A"] for t in proto.honest[1].tape_space)
        laws.add(tuple(sorted(c.items())))
    assert len(laws) == 1
    (law,) = laws
    assert len(law) == 9 and len({cnt for _, cnt in law}) == 1


def test_nonzero_scaling_preserves_zero_pattern():
    for x, R, Z in product(product(F3.elements(), repeat=2), repeat=3):
        if any(z.code == 0 for z in Z):
            continue
        A = alice_round(x, R, Z, ID)["A"]
        assert [a.code == 0 for a in A] == [xi == ri for xi, ri in zip(x, R)]


def test_params_validation():
    with pytest.raises(ValueError):
        HamDistParams(0, F3)
