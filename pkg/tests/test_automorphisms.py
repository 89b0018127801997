"""Order-p model automorphisms and their ramification data."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wildram.automorphisms import (
    aut_order,
    aut_power,
    conductor,
    norm_series,
    ramification_data,
    standard_sigma,
)
from wildram.errors import InvalidInput
from wildram.parsing import parse_ring
from wildram.series import TruncatedSeries


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 9))
def test_model_has_order_p_and_conductor_m(p, m):
    if math.gcd(m, p) != 1:
        return
    s = standard_sigma(p, m)
    assert conductor(s) == m
    assert aut_order(s, 2 * p) == p
    data = ramification_data(s)
    assert data.beta == (m + 1) * (p - 1)


def test_p_th_power_is_identity():
    s = standard_sigma(5, 2)
    T = TruncatedSeries.variable(s.ring, s.prec)
    assert aut_power(s, 5).image.agrees_with(T)
    assert not aut_power(s, 2).image.agrees_with(T)


def test_norm_is_invariant():
    s = standard_sigma(3, 2)
    n = norm_series(s)
    assert n.valuation() == 3
    assert s(n).agrees_with(n)


def test_ramification_dict():
    d = ramification_data(standard_sigma(3, 2)).to_dict()
    assert d == {"order": 3, "breaks": {"1": 3, "2": 3}, "filtration": [3, 3, 3], "conductor": 2, "beta": 6}


def test_deformed_parameter_in_artin_ring():
    R = parse_ring("F5[u]/(u^5)")
    s = standard_sigma(5, 2, R, "1+u")
    assert s.ring is R
    # reduces to the closed-fibre automorphism
    assert conductor(standard_sigma(5, 2, R, 1)) == 2


@pytest.mark.parametrize(
    "args",
    [(3, 3), (5, 0), (4, 1)],
)
def test_invalid_pairs(args):
    with pytest.raises(InvalidInput):
        standard_sigma(*args)


def test_parameter_must_be_in_the_right_coset():
    R = parse_ring("F5[u]/(u^3)")
    with pytest.raises(InvalidInput):
        standard_sigma(5, 1, R, 1)
    with pytest.raises(InvalidInput):
        standard_sigma(5, 2, R, "u")
