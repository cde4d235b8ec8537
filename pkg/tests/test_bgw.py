from itertools import product

import pytest

from trisec.adversary import input_substitution, uniform_final_share
from trisec.analyzer import InputLaw, build_joint, output_distribution
from trisec.bgw import (
    BgwParams,
    bgw_protocol,
    batch_output_counts,
    interpolate_r0,
    lagrange_weights_at_zero,
    local_r_share,
    output_range,
    quadratic_distance,
    share,
)
from trisec.engine import enumerate_tapes, run
from trisec.field import GF

from oracles import lagrange_at_zero

F5 = GF(5)


def test_share_examples():
    for v, j in product(F5.elements(), repeat=2):
        assert share(v, F5.zero, j) == v
    assert share(F5(2), F5(3), F5(2)) == F5(3)
    assert [share(F5(1), F5(2), F5(j)).code for j in (1, 2, 3)] == [3, 0, 2]


def test_local_r_share_examples():
    p = (F5(3), F5(0))
    assert local_r_share(p, p) == F5.zero
    assert local_r_share((F5(3),), (F5(1),)) == F5(4)
    assert local_r_share(p, (F5(1), F5(1))) == F5(0)


@pytest.mark.parametrize("N", [5, 7, 11, 13])
def test_lagrange_weights_match_rational_oracle(N):
    F = GF(N)
    rational = lagrange_at_zero([1, 2, 3])
    assert rational == [3, -3, 1]
    got = lagrange_weights_at_zero((1, 2, 3), F)
    assert [w.code for w in got] == [int(r) % N for r in rational]


def test_lagrange_weights_other_points():
    pts = (2, 4, 6)
    F = GF(11)
    expect = [int(r.numerator * pow(r.denominator, -1, 11)) % 11 for r in lagrange_at_zero(pts)]
    assert [w.code for w in lagrange_weights_at_zero(pts, F)] == expect


def test_interpolation_examples():
    for c in F5.elements():
        assert interpolate_r0(c, c, c) == c
    assert interpolate_r0(F5(1), F5(4), F5(9)) == F5.zero


def test_interpolation_identity_all_quadratics():
    for a0, a1, a2 in product(range(5), repeat=3):
        r = lambda j: F5((a0 + a1 * j + a2 * j * j) % 5)
        assert interpolate_r0(r(1), r(2), r(3)) == F5(a0)


def test_output_range():
    assert output_range(1, 3) == {0, 1, 4}
    assert output_range(4, 2) == {0, 1, 2, 3, 4}


def test_params_validation():
    with pytest.raises(ValueError):
        BgwParams(2, 2, 4)  # not prime
    with pytest.raises(ValueError):
        BgwParams(5, 2, 5)  # 5 <= n(s-1)^2
    with pytest.raises(ValueError):
        BgwParams(1, 2, 5, (1, 6, 2))  # 6 = 1 mod 5
    with pytest.raises(ValueError):
        BgwParams(1, 2, 5, (0, 1, 2))


def test_exhaustive_honest_correctness():
    proto = bgw_protocol(BgwParams(2, 2, 5))
    tapes = list(enumerate_tapes(proto.honest))
    assert len(tapes) == 625
    for x, y in product(proto.x_alphabet, repeat=2):
        for t in tapes:
            rec = run(proto, proto.honest, x, y, t)
            assert rec.outputs == (None, None, quadratic_distance(x, y))


def test_single_difference_gives_one():
    proto = bgw_protocol(BgwParams(2, 2, 5))
    assert {run(proto, proto.honest, (1, 0), (0, 0), t).W for t in enumerate_tapes(proto.honest)} == {1}


def test_final_share_map_is_bijective():
    proto = bgw_protocol(BgwParams(1, 3, 5))
    dev = uniform_final_share(proto)
    programs = dict(proto.honest)
    programs[1] = dev.program
    # fix everything except the forged share and check every value appears once
    honest_tape = proto.honest[1].tape_space[2]
    bob_tape = proto.honest[2].tape_space[3]
    ws = [run(proto, programs, (2,), (0,), ((honest_tape, r1), bob_tape, ())).W for r1 in F5.elements()]
    assert sorted(ws) == list(range(5))


@pytest.mark.parametrize("params", [BgwParams(1, 3, 5), BgwParams(2, 2, 5), BgwParams(1, 2, 3 + 4, (1, 3, 5))])
def test_batch_evaluator_matches_engine(params):
    proto = bgw_protocol(params)
    law = InputLaw.uniform(proto)
    deviations = [None, uniform_final_share(proto, "alice"), uniform_final_share(proto, "bob"),
                  input_substitution(proto, "bob", proto.y_alphabet[-1])]
    for dev in deviations:
        fast = output_distribution(proto, dev, law)
        slow = build_joint(proto, dev, law, ("X", "Y", "W"))
        assert fast.pmf() == slow.pmf()


def test_batch_declines_unknown_deviation():
    from trisec.adversary import view_leak

    params = BgwParams(1, 2, 5)
    proto = bgw_protocol(params)
    assert batch_output_counts(params, view_leak(proto, "charlie"), (0,), (1,)) is None
