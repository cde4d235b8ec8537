from itertools import product

import pytest

from trisec.field import (
    GF,
    FieldMismatchError,
    add,
    div,
    enumerate_field,
    find_irreducible,
    inv,
    is_irreducible,
    mul,
    neg,
    sequences,
    sub,
)

from oracles import ext_field_mul_table

SHIPPED = [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (2, 4), (7, 1)]


def test_prime_field_examples():
    assert GF(2)(1) + GF(2)(1) == GF(2)(0)
    assert GF(3)(2) + GF(3)(2) == GF(3)(1)
    assert GF(3)(0) - GF(3)(2) == GF(3)(1)
    assert GF(5)(1) - GF(5)(3) == GF(5)(3)
    assert GF(3)(2) * GF(3)(2) == GF(3)(1)
    assert GF(5)(3).inverse() == GF(5)(2)


def test_gf4_examples():
    F = GF(2, 2)
    x, x1 = F([0, 1]), F([1, 1])
    assert x + x1 == F.one
    assert x * x == x1
    assert inv(x) == x1
    assert [repr(e) for e in enumerate_field(F)] == ["0", "1", "x", "x+1"]


def test_enumeration_order():
    assert [int(e) for e in enumerate_field(GF(2))] == [0, 1]
    assert [int(e) for e in enumerate_field(GF(3))] == [0, 1, 2]


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (2, 4)])
def test_multiplication_matches_polynomial_reduction(p, k):
    F = GF(p, k)
    table = ext_field_mul_table(p, k, list(F.reduction_poly))
    for a, b in product(F.elements(), repeat=2):
        assert (a * b).code == table[(a.code, b.code)]


@pytest.mark.parametrize("p,k", SHIPPED)
def test_axioms_exhaustive(p, k):
    F = GF(p, k)
    E = F.elements()
    zero, one = F.zero, F.one
    for a in E:
        assert a + zero == a and a * one == a
        assert a + neg(a) == zero
        assert a - a == zero
        if a != zero:
            assert a * inv(a) == one
            assert div(a, a) == one
    for a, b in product(E, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
        assert sub(a, b) == add(a, neg(b))
    for a, b, c in product(E, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_char_two_subtraction_is_addition():
    F = GF(2)
    for a, b in product(F.elements(), repeat=2):
        assert a - b == a + b


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GF(5).zero.inverse()
    with pytest.raises(ZeroDivisionError):
        div(GF(3).one, GF(3).zero)


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        GF(3)(1) + GF(5)(1)
    with pytest.raises(FieldMismatchError):
        mul(GF(2, 2).one, GF(2).one)


def test_bad_parameters():
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        GF(2, 2, (1, 0, 1))  # x^2+1 = (x+1)^2 over GF(2)


def test_irreducibility_search():
    for p, k in [(2, 2), (2, 3), (3, 2), (5, 2), (2, 5)]:
        poly = find_irreducible(p, k)
        assert len(poly) == k + 1 and poly[-1] == 1
        assert is_irreducible(poly, p)


def test_sequences_counts():
    F = GF(3)
    assert len(list(sequences(F, 2))) == 9
    assert len(list(sequences(F, 2, nonzero=True))) == 4


def test_config_round_trip():
    F = GF(3, 2)
    from trisec.field import field_from_config

    assert field_from_config(F.to_config()) is F
