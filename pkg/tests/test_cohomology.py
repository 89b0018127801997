"""Cohomology of the twisted derivation module."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wildram.automorphisms import standard_sigma
from wildram.cohomology import (
    ThetaElement,
    cocycle_class_check,
    delta_and_norm,
    gamma,
    h1_context,
    h1_module_structure,
    h2_class_is_zero,
    h_dims_bruteforce,
    h_dims_formula,
)
from wildram.series import TruncatedSeries


@given(st.sampled_from([2, 3, 5, 7, 11]), st.integers(1, 40))
def test_formula_matches_closed_form(p, m):
    if math.gcd(m, p) != 1:
        return
    beta = (m + 1) * (p - 1)
    expected = 2 * beta // p - math.ceil(beta / p)
    assert h_dims_formula(p, beta) == (expected, expected)


def test_p3_m2_report():
    r = h_dims_bruteforce(standard_sigma(3, 2))
    assert (r.dim_h1_brute, r.dim_h2_brute) == (2, 2)
    assert r.elementary_divisors == [1, 1]
    assert r.window_tate_dim == 4
    assert r.h2_exponents == (2, 4)
    assert r.ideal_reading == "k[[Y]]"
    d = r.to_dict()
    assert d["dim_h1"] == 2 and d["stabilized"] is True


def test_rigid_case_has_no_classes():
    r = h_dims_bruteforce(standard_sigma(3, 1))
    assert (r.dim_h1_brute, r.dim_h2_brute) == (0, 0)


def test_structure_closed_form_p5_m3():
    st_ = h1_module_structure(standard_sigma(5, 3)).structure
    assert st_["q"] == 1 and st_["l"] == 2
    assert st_["exponents_closed_form"] == st_["exponents_observed"] == [1, 0, 1, 0]
    assert st_["s_top"] == -1
    assert all(st_["checks"].values())


def test_gamma_is_positive():
    assert [gamma(j, 5, 1, 2) for j in range(5)] == [1, 2, 2, 3, 4]


@pytest.mark.parametrize("p,m", [(5, 2), (3, 2), (7, 3)])
@pytest.mark.parametrize("e", [0, 1, 3])
def test_coboundaries_have_zero_class(p, m, e):
    s = standard_sigma(p, m)
    need = h1_context(s).required_theta_precision()
    s = s.at_precision(need + 10)
    x = ThetaElement(TruncatedSeries.from_terms(s.ring, {e: 1}, need + 10))
    d, _ = delta_and_norm(s, x)
    assert cocycle_class_check(s, ThetaElement(d.h.truncate(need))) == "zero"


def test_obstruction_field_class_is_nonzero_for_p5_m2():
    s = standard_sigma(5, 2)
    ctx = h1_context(s)
    need = ctx.required_theta_precision()
    s = s.at_precision(max(need, s.prec) + 8)
    x = ThetaElement(TruncatedSeries.from_terms(s.ring, {3: 1}, need + 8))
    assert h2_class_is_zero(s, x) is False
