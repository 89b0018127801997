"""Truncated series: arithmetic, composition, reversion, roots."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wildram.errors import InvalidInput
from wildram.parsing import parse_ring
from wildram.rings import prime_field, rationals
from wildram.series import TruncatedSeries, compose, mth_root_unit, reversion

PREC = 8
R = parse_ring("F5[u]/(u^3)")


def series(ring, low=0, unit=False):
    def build(cs):
        s = TruncatedSeries.from_list(ring, cs, PREC, low=low)
        return s
    n = PREC - low
    gen = st.lists(st.integers(0, 4), min_size=n, max_size=n)
    if unit:
        gen = gen.map(lambda cs: [1] + cs[1:])
    return gen.map(build)


@settings(max_examples=40, deadline=None)
@given(series(R), series(R), series(R))
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == TruncatedSeries.zeros(R, PREC)


@settings(max_examples=40, deadline=None)
@given(series(R, unit=True))
def test_unit_inverse(u):
    one = TruncatedSeries.constant(R, 1, PREC)
    assert u * u.inverse() == one


@settings(max_examples=30, deadline=None)
@given(series(R, low=1), series(R, low=1), series(R, low=1))
def test_composition_associative(f, g, h):
    T = TruncatedSeries.variable(R, PREC)
    g = g + T  # unit linear term
    h = h + T
    assert compose(compose(f, g), h).agrees_with(compose(f, compose(g, h)))


@settings(max_examples=30, deadline=None)
@given(series(R, low=2))
def test_reversion_is_inverse(g):
    T = TruncatedSeries.variable(R, PREC)
    f = T + g
    assert compose(f, reversion(f)).agrees_with(T)
    assert compose(reversion(f), f).agrees_with(T)


def test_square_root():
    k = prime_field(5)
    s = TruncatedSeries.parse(k, "1 + T^2", PREC)
    r = mth_root_unit(s, 2)
    assert r * r == s


def test_parse_and_str():
    k = prime_field(5)
    s = TruncatedSeries.parse(k, "1 + 2*T^2", 6)
    assert str(s) == "1 + 2*T^2 + O(T^6)"
    assert str(s.inverse()) == "1 + 3*T^2 + 4*T^4 + O(T^6)"


def test_laurent_valuation_and_derivative():
    Q = rationals()
    s = TruncatedSeries.from_terms(Q, {-2: 1, 3: 2}, 6)
    assert s.valuation() == -2
    assert s.derivative().coefficient(2) == Q(6)


def test_composition_needs_no_unit_constant():
    k = prime_field(5)
    f = TruncatedSeries.parse(k, "T + T^2", PREC)
    g = TruncatedSeries.parse(k, "1 + T", PREC)
    with pytest.raises(InvalidInput):
        compose(f, g)
