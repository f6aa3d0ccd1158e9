import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ffmzv import field_of_order, make_field
from ffmzv.errors import (DegreeMismatch, DivisionByZero, FieldMismatch, FieldTooLarge,
                          NotIrreducible, NotPrime)
from ffmzv.field import (character_power_sum, enumerate_field, field_from_dict, fq_add, fq_inv,
                         fq_mul, fq_neg, literal_power_sum, prime_power)

ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def test_make_field_examples():
    F3 = make_field(3, 1, [0, 1])
    assert F3.q == 3
    F4 = make_field(2, 2, [1, 1, 1])
    assert F4.q == 4
    with pytest.raises(NotIrreducible):
        make_field(2, 2, [0, 0, 1])


def test_make_field_errors():
    with pytest.raises(NotPrime):
        make_field(6)
    with pytest.raises(DegreeMismatch):
        make_field(2, 2, [1, 1])
    with pytest.raises(FieldTooLarge):
        make_field(2, 9)


def test_prime_power():
    assert prime_power(25) == (5, 2)
    assert prime_power(7) == (7, 1)
    with pytest.raises(ValueError):
        prime_power(12)


def test_arithmetic_examples():
    F3 = make_field(3)
    assert fq_mul(F3.element(2), F3.element(2)) == F3.one
    F4 = make_field(2, 2, [1, 1, 1])
    x = F4.gen
    assert str(fq_mul(x, x)) == "x+1"
    F5 = make_field(5)
    assert fq_inv(F5.element(2)) == F5.element(3)


def test_errors():
    F5 = make_field(5)
    with pytest.raises(DivisionByZero):
        fq_inv(F5.zero)
    with pytest.raises(FieldMismatch):
        fq_add(F5.one, make_field(3).one)


def test_enumeration_order():
    assert [str(a) for a in enumerate_field(make_field(2))] == ["0", "1"]
    assert [str(a) for a in enumerate_field(make_field(3))] == ["0", "1", "2"]
    assert [str(a) for a in enumerate_field(make_field(2, 2))] == ["0", "1", "x", "x+1"]


def test_character_examples():
    F3, F5 = make_field(3), make_field(5)
    assert character_power_sum(F3, 2) == F3.element(2)
    assert character_power_sum(F3, 1) == F3.zero
    assert character_power_sum(F5, 8) == F5.element(4)
    assert character_power_sum(F5, 0) == F5.zero


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms(q):
    F = field_of_order(q)
    elems = enumerate_field(F)
    assert len(set(elems)) == q
    nonzero = elems[1:]
    for a in nonzero:
        assert a * a.inverse() == F.one
        assert a ** (q - 1) == F.one
        assert a + fq_neg(a) == F.zero
    # the multiplicative group is cyclic of order q - 1
    orders = []
    for a in nonzero:
        k, b = 1, a
        while b != F.one:
            b, k = b * a, k + 1
        orders.append(k)
    assert max(orders) == q - 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ORDERS), st.data())
def test_ring_laws(q, data):
    F = field_of_order(q)
    a, b, c = (F.element(data.draw(st.integers(0, q - 1))) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert int(F.element(int(a))) == int(a)
    if b:
        assert (a / b) * b == a


def test_frobenius_is_additive():
    for q in (4, 8, 9, 25):
        F = field_of_order(q)
        for a, b in itertools.product(enumerate_field(F), repeat=2):
            assert (a + b) ** F.p == a ** F.p + b ** F.p


def test_round_trip_dict():
    F = make_field(3, 2)
    assert field_from_dict(F.to_dict()) == F


def test_literal_matches_closed_form_small():
    F = make_field(7)
    for m in range(0, 20):
        assert character_power_sum(F, m) == literal_power_sum(F, m)
