"""Exact Artin rings: arithmetic laws, units, parsing."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wildram.errors import InvalidInput, RingError
from wildram.parsing import parse_ring
from wildram.rings import artin_local, integers_mod, prime_field, rationals, small_extension

RINGS = [
    "F5",
    "Z/3^3",
    "F3[u]/(u^4)",
    "F5[e]/(e^2)",
    "Z/9[u]/(u^2)",
    "F7[x,y]/deg(3)",
]


def elements(ring):
    n = ring.dim if hasattr(ring, "dim") else 1
    return st.lists(st.integers(-50, 50), min_size=n, max_size=n).map(ring.element)


@pytest.mark.parametrize("name", RINGS)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_commutative_ring_laws(name, data):
    R = parse_ring(name)
    a, b, c = (data.draw(elements(R)) for _ in range(3))
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == R.zero()
    assert a * R.one() == a


@pytest.mark.parametrize("name", RINGS)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_units_invert_and_nonunits_are_nilpotent(name, data):
    R = parse_ring(name)
    a = data.draw(elements(R))
    if a.is_unit():
        assert a * a.inverse() == R.one()
    else:
        assert a.is_nilpotent()
        assert a ** a.nilpotency_index() == R.zero()


def test_finite_sizes():
    assert parse_ring("F5[u]/(u^3)").size() == 125
    assert parse_ring("Z/3^2").size() == 9
    assert parse_ring("F3[u]/(u^4)").length() == 4


def test_nilpotency():
    R = parse_ring("F5[u]/(u^3)")
    assert R("u").nilpotency_index() == 3
    Z = integers_mod(3, 2)
    assert Z(3).is_nilpotent() and not Z(3).is_unit()
    assert Z(2).inverse() == Z(5)


def test_rationals():
    Q = rationals()
    assert str(Q("1/2") + Q(3)) == "7/2"
    assert Q(12).valuation(2) == 2


def test_element_parsing_round_trip():
    R = parse_ring("F5[u]/(u^5)")
    x = R("2*u^4 + 3*u + 1")
    assert R(str(x)) == x
    assert R("-u^4/2") == R("2*u^4")


def test_generic_modulus():
    R = artin_local(integers_mod(5, 3), "X", modulus=[5, 5, 1])  # X^2 + 5X + 5
    X = R.gen("X")
    assert X * X == -5 * X - 5
    assert X.is_nilpotent()


@pytest.mark.parametrize("bad", ["F4", "Z/6^2", "F5[u]/(u^0)", "G7", ""])
def test_bad_descriptors(bad):
    with pytest.raises(InvalidInput):
        parse_ring(bad)


def test_division_by_nonunit():
    R = parse_ring("F5[u]/(u^3)")
    with pytest.raises(RingError):
        R(2) / R("u")


def test_small_extension():
    w = small_extension(parse_ring("F5[u]/(u^5)"), parse_ring("F5[u]/(u^4)"))
    assert str(w.t) == "u^4"
    assert w.reduce(w.source("1+u+u^4")) == w.target("1+u")
    w2 = small_extension(parse_ring("Z/5^2"), prime_field(5))
    assert str(w2.t) == "5"
    with pytest.raises(RingError):
        small_extension(parse_ring("F5[u]/(u^5)"), parse_ring("F5[u]/(u^3)"))
