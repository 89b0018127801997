"""Chebyshev polynomials, the Bezout certificate and the Moebius family."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wildram.chebyshev import (
    IntPolynomial,
    MobiusMatrix,
    cheb_polys,
    laurent_identities_hold,
    mobius_order_test,
    psi_poly,
    versal_m1_check,
)
from wildram.errors import InvalidInput
from wildram.parsing import parse_ring
from wildram.rings import rationals

polys = st.lists(st.integers(-9, 9), min_size=1, max_size=5).map(IntPolynomial)


@given(polys, polys.filter(lambda q: q.degree >= 0 and any(q.coeffs)))
def test_divmod_reconstructs(a, b):
    q, r = a.divmod(b)
    assert (q * b + r).coeffs == a.coeffs
    assert r.degree < b.degree or not any(r.coeffs)


def test_polynomial_basics():
    P = IntPolynomial([1, 2, 1])
    assert str(P) == "X^2 + 2*X + 1"
    assert str(P.compose(IntPolynomial([1, 1]))) == "X^2 + 4*X + 4"


def test_small_chebyshev():
    T3, S2 = cheb_polys(3)
    assert str(T3) == "4*X^3 - 3*X"
    assert str(S2) == "4*X^2 - 1"
    assert laurent_identities_hold(3, T3, S2)


@pytest.mark.parametrize(
    "p,psi",
    [(3, "X + 3"), (5, "X^2 + 5*X + 5"), (7, "X^3 + 7*X^2 + 14*X + 7")],
)
def test_psi_values(p, psi):
    c = psi_poly(p)
    assert str(c.psi) == psi
    assert c.psi_mod_p_unit == 1
    assert c.psi_is_shifted_phi and c.psi_divides_both


def test_psi_rejects_composites_and_two():
    for p in (2, 4, 9):
        with pytest.raises(InvalidInput):
            psi_poly(p)


def test_mobius_determinant_one():
    Q = rationals()
    for a in (-3, 1, 5):
        M = MobiusMatrix.family(Q(a))
        assert M.det == Q(1)


def test_mobius_order_three_routes():
    assert mobius_order_test(rationals(), -3, 3).matrix
    v = mobius_order_test(rationals(), 1, 5)
    assert not v.matrix and v.series is None
    v = mobius_order_test(parse_ring("F5[u]/(u^3)"), "u", 5)
    assert v.matrix is v.chebyshev is v.series is False


def test_versal_p3_is_rigid():
    with pytest.raises(InvalidInput):
        versal_m1_check(3)


def test_versal_p5_report():
    r = versal_m1_check(5, 2)
    assert r["psi"] == "X^2 + 5*X + 5"
    assert r["order_p"] and r["no_smaller_order"]
