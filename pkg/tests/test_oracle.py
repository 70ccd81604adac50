from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vectdef.catalog import cocycle, entry
from vectdef.cochains import Cochain1, Cochain2, coboundary1, coboundary2
from vectdef.jets import JetPoly
from vectdef.oracle import (CPoly, OracleError, act_density, bracket, check_cocycle1, check_cocycle2,
                            check_equal2, coboundary1_concrete, eval_jet)
from vectdef.scalar import LAMBDA, Scalar

x = CPoly.monomial


def test_act_density_examples():
    assert act_density(x(2), x(1), 1) == CPoly({2: 3})
    f = CPoly([1, 2, 3])
    assert act_density(x(0), f, 5) == f.derivative()
    for p in range(5):
        assert act_density(x(1), x(p), Fraction(2, 3)) == x(p, p + Fraction(2, 3))


def test_bracket_examples():
    assert bracket(x(2), x(1)) == CPoly({2: -1})
    assert not bracket(CPoly([1, 2, 3]), CPoly([1, 2, 3]))
    for n in range(1, 6):
        assert bracket(x(0), x(n)) == x(n - 1, n)


def test_evaluate_catalog_cochains():
    c01 = cocycle(Scalar(0), 1)
    assert eval_jet(c01.body, [x(3)], x(1)) == CPoly({2: 6})
    om = entry("Omega[0,1]").instantiate()
    assert eval_jet(om.body, [x(2), x(3)], x(0)) == CPoly({2: 6})
    assert not eval_jet(JetPoly(1, {(0, 1): 1, (0, 2): 1}), [x(0)], x(0))


def test_weight_dependent_coefficients_need_l():
    c = cocycle(LAMBDA, 4)
    with pytest.raises(OracleError):
        eval_jet(c.body, [x(3)], x(3))


def test_cocycle_checks():
    c = cocycle(LAMBDA, 2)
    assert check_cocycle1(c.body, c.weight, c.shift, 8, (Fraction(7, 3),)).passed
    om = entry("Omega[0,1]").instantiate()
    assert check_cocycle2(om.body, om.weight, om.shift, 6, (None,)).passed
    # the printed shift-3 formula is not closed; both routes must say so
    disp = entry("Omega[l,l+3]").instantiate()
    assert coboundary2(disp).body
    res = check_cocycle2(disp.body, disp.weight, 3, 8, (Fraction(7, 3),))
    assert not res.passed and res.failing is not None


def test_shift_one_body_without_density_derivatives_is_closed_at_every_weight():
    # the module action on such a body does not see the weight
    body = entry("Omega[0,1]").instantiate().body
    for w in (Scalar(1), Scalar(2), Scalar(-3)):
        assert not coboundary2(Cochain2(w, 1, body)).body
        assert check_cocycle2(body, w, 1, 6, (None,)).passed


def test_perturbed_coefficient_reports_a_witness_tuple():
    c = cocycle(LAMBDA, 2)
    bad = c.body + JetPoly(1, {(1, 2): Fraction(1, 100)})
    res = check_cocycle1(bad, LAMBDA, 2, 8, (Fraction(7, 3),))
    assert not res.passed
    lam, degs = res.failing
    assert lam == Fraction(7, 3) and len(degs) == 3
    assert res.lhs != res.rhs


def test_equal2_detects_difference():
    om = entry("Omega[0,1]").instantiate().body
    assert check_equal2(om, om, 6, (None,)).passed
    assert not check_equal2(om, om.scale(2), 6, (None,)).passed


def test_coboundary_formula_for_shift_two_at_weight_two():
    b = Cochain1.from_coeffs(Scalar(2), 2, [Scalar(1)] * 4)
    symbolic = coboundary1(b).body
    res = [coboundary1_concrete(b.body, 2, 2, x(i), x(j), x(k)) == eval_jet(symbolic, [x(i), x(j)], x(k))
           for i in range(5) for j in range(5) for k in range(5)]
    assert all(res)


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
fields = st.lists(coeff, min_size=1, max_size=5).map(CPoly)


@given(fields, fields)
def test_bracket_antisymmetric(a, b):
    assert bracket(a, b) == -bracket(b, a)


@given(fields, fields, fields, coeff)
def test_density_action_is_a_representation(a, b, f, w):
    lhs = act_density(a, act_density(b, f, w), w) - act_density(b, act_density(a, f, w), w)
    assert lhs == act_density(bracket(a, b), f, w)
