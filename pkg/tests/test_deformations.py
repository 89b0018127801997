"""Order condition, obstruction classes, dimension calculators."""

import pytest

from wildram.deformations import (
    default_quotient,
    global_dim_report,
    krull_dim_local,
    nontriviality_inequality,
    obstruction_class,
    order_condition_check,
)
from wildram.errors import InvalidInput
from wildram.parsing import parse_ring


def test_order_check_sum_vanishing():
    R = parse_ring("F5[u]/(u^5)")
    chk = order_condition_check(5, 2, R, "1+u")
    assert chk.geometric_sum == "u^4" and not chk.series_order_p and chk.agree
    chk = order_condition_check(5, 2, parse_ring("F5[u]/(u^4)"), "1+u")
    assert chk.series_order_p and chk.sum_vanishes


def test_order_check_rejects():
    with pytest.raises(InvalidInput):
        order_condition_check(5, 1, parse_ring("F5"), 0)
    with pytest.raises(InvalidInput):
        order_condition_check(2, 3, parse_ring("F2"), 1)


def test_inequality():
    assert not nontriviality_inequality(3, 1)
    assert nontriviality_inequality(5, 1)
    assert nontriviality_inequality(3, 2)


def test_worked_obstruction():
    rep = obstruction_class(5, 2, parse_ring("F5[u]/(u^5)"), parse_ring("F5[u]/(u^4)"), "1+u")
    assert rep.defect.startswith("2*u^4*T^3")
    assert rep.kernel_scalar == 2 and rep.defect_matches and not rep.class_vanishes
    ok = obstruction_class(5, 2, parse_ring("F5[u]/(u^5)"), parse_ring("F5[u]/(u^4)"), "1")
    assert ok.class_vanishes


def test_m1_obstruction_uses_chebyshev():
    rep = obstruction_class(5, 1, parse_ring("F5[u]/(u^3)"), parse_ring("F5[u]/(u^2)"), "u")
    assert rep.chebyshev is not None
    assert rep.defect_matches


def test_obstruction_preconditions():
    src, tgt = parse_ring("F5[u]/(u^3)"), parse_ring("F5[u]/(u^2)")
    with pytest.raises(InvalidInput):
        obstruction_class(5, 2, src, tgt, "2")
    # in characteristic p the geometric sum of 1 + x is x^(p-1), nonzero in the target here
    with pytest.raises(InvalidInput):
        obstruction_class(5, 2, parse_ring("F5[u]/(u^6)"), parse_ring("F5[u]/(u^5)"), "1+u")
    with pytest.raises(InvalidInput):
        obstruction_class(2, 3, parse_ring("F2[u]/(u^2)"), parse_ring("F2"), "1")


@pytest.mark.parametrize(
    "src,tgt",
    [("Z/3^2", "F3"), ("Z/5^3", "Z/5^2"), ("F5[u]/(u^5)", "F5[u]/(u^4)")],
)
def test_default_quotient(src, tgt):
    assert str(default_quotient(parse_ring(src))) == tgt


def test_no_default_quotient():
    with pytest.raises(InvalidInput):
        default_quotient(parse_ring("F7[x,y]/deg(3)"))


def test_krull():
    r = krull_dim_local(5, 3)
    assert (r.absolute, r.relative, r.chain_value, r.chain_discrepancy) == (1, 0, 2, True)
    r = krull_dim_local(5, 4)
    assert (r.absolute, r.chain_discrepancy) == (2, False)
    assert krull_dim_local(3, 1).rigid


def test_global_report():
    d = global_dim_report(5, [4]).to_dict()
    assert d["consistency_flags"] == []
    d = global_dim_report(5, [2]).to_dict()
    assert "local_contribution_convention" in d["consistency_flags"]
    assert d["dim_h1_exact"] == 1 and d["dim_h1_global_formula"] == 2
