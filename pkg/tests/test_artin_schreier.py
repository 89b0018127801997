"""Polar parts, Harbater and genus calculators, deformed covers."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wildram.artin_schreier import (
    ASClass,
    _dual_numbers,
    build_deformed_cover,
    deformation_direction_valuation,
    genus_rh,
    harbater_dim,
    independence_check,
    polar_reduce,
    split_conductor,
    valid_directions,
)
from wildram.errors import InvalidInput


def test_parse():
    assert ASClass.parse(5, "T^-10 + 3*T^-2 + T^2").terms == {-10: 1, -2: 3, 2: 1}


def test_worked_steps():
    r = polar_reduce(ASClass.parse(3, "1*T^-9 + 1*T^-3"))
    assert r.steps == [(3, 1), (1, 2)]
    assert r.to_dict()["polar_part"] == "2*T^-1"


def test_p_power_folds_down():
    # T^-2 = P(T^-1) + T^-1 in characteristic 2
    r = polar_reduce(ASClass.parse(2, "T^-2"))
    assert r.polar.terms() == {-1: 1}
    assert polar_reduce(ASClass.parse(3, "T^-3 - T^-1")).polar.terms() == {}


@settings(max_examples=60)
@given(
    st.sampled_from([2, 3, 5, 7]),
    st.dictionaries(st.integers(-40, 6), st.integers(0, 6), max_size=6),
)
def test_reduction_laws(p, terms):
    r = polar_reduce(ASClass(p, terms))
    assert r.witness_holds()
    assert all(e < 0 and e % p for e in r.polar.terms())
    assert polar_reduce(ASClass(p, r.polar.terms())).polar == r.polar


def test_harbater():
    assert harbater_dim(3, [5])["dimension"] == 4
    h = harbater_dim(5, [2, 6])
    assert h["dimension"] == 2 + 5
    assert h["punctured_lines"] == 2
    with pytest.raises(InvalidInput):
        harbater_dim(3, [3])


def test_genus():
    assert genus_rh(3, [2, 2])["genus"] == 4
    assert genus_rh(5, [2])["genus"] == 2
    assert genus_rh(2, [1], g_quotient=1)["genus"] == 2


def test_split_and_directions():
    assert split_conductor(5, 3) == (1, 2)
    assert split_conductor(3, 5) == (2, 1)
    assert valid_directions(3, 5) == [1, 2]
    assert valid_directions(3, 4) == [1]


@pytest.mark.parametrize("p,m", [(3, 5), (3, 4), (5, 3), (5, 9)])
def test_closed_fibre_cover(p, m):
    c = build_deformed_cover(p, m)
    assert c.order == p and c.t_invariant
    assert c.to_dict()["ring"] == f"F{p}"


def test_direction_valuation_and_independence():
    R = _dual_numbers(3)
    c = build_deformed_cover(3, 5, R, {2: R.gen("e")})
    d = deformation_direction_valuation(c, 2)
    assert d["valuation"] == d["expected"] == 0
    r = independence_check(5, 8)
    assert r["independent"] and r["rank"] == 1
