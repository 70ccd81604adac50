from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vectdef.jets import (JetPoly, SlotError, apply_operator, lie_template, render_monomial,
                          substitute_bracket)
from vectdef.oracle import CPoly, bracket, eval_jet
from vectdef.scalar import LAMBDA, Scalar


def J(terms, nvf=None):
    nvf = len(next(iter(terms))) - 1 if nvf is None else nvf
    return JetPoly(nvf, terms)


def test_derivative_leibniz_examples():
    assert J({(2, 0): 1}).derivative() == J({(3, 0): 1, (2, 1): 1})
    assert J({(1, 2, 0): 1}).derivative() == J({(2, 2, 0): 1, (1, 3, 0): 1, (1, 2, 1): 1})
    assert not JetPoly.zero(1).derivative()


def test_substitute_bracket_examples():
    assert substitute_bracket(J({(0, 0): 1})) == J({(0, 1, 0): 1, (1, 0, 0): -1})
    assert substitute_bracket(J({(1, 0): 1})) == J({(0, 2, 0): 1, (2, 0, 0): -1})
    assert substitute_bracket(J({(2, 0): 1})) == J({(0, 3, 0): 1, (1, 2, 0): 1, (2, 1, 0): -1, (3, 0, 0): -1})


def test_swap_and_antisymmetrize():
    assert J({(1, 2, 0): 1}).swap() == J({(2, 1, 0): 1})
    assert J({(1, 2, 0): 1}).antisymmetrize() == J({(1, 2, 0): 1, (2, 1, 0): -1})
    assert not J({(1, 1, 0): 1}).antisymmetrize()


def test_slot_errors():
    with pytest.raises(SlotError):
        JetPoly(1, {(1, 2, 0): 1})
    with pytest.raises(SlotError):
        J({(1, 0): 1}) + J({(1, 1, 0): 1})
    with pytest.raises(SlotError):
        J({(1, 0): 1}).swap()
    with pytest.raises(SlotError):
        substitute_bracket(J({(1, 1, 0): 1}))


def test_rendering():
    assert render_monomial((2, 1, 0)) == "X''Y'f"
    assert render_monomial((3, 0, 4)) == "X^(3)Yf^(4)"
    assert J({(1, 2, 0): 1, (2, 1, 0): -1}).render_antisymmetric() == "-X''Y'f - (X<->Y)"
    assert J({(1, 0): LAMBDA, (0, 1): 1}).render() in ("Xf' + (l)*X'f", "(l)*X'f + Xf'")


def test_json_round_trip():
    p = J({(1, 2, 0): Fraction(3, 4), (0, 0, 3): LAMBDA})
    assert JetPoly.from_json(2, p.to_json()) == p


# concrete cross-checks: jet identities against numeric polynomial evaluation

coeff = st.fractions(min_value=-4, max_value=4, max_denominator=3)
jets1 = st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), coeff, min_size=1, max_size=4).map(
    lambda t: JetPoly(1, t))
fields = st.lists(coeff, min_size=1, max_size=5).map(CPoly)


@given(jets1, fields, fields)
def test_total_derivative_matches_concrete_derivative(p, x, f):
    assert eval_jet(p.derivative(), [x], f) == eval_jet(p, [x], f).derivative()


@given(jets1, fields, fields, fields)
def test_bracket_substitution_matches_concrete_bracket(p, x, y, f):
    assert eval_jet(substitute_bracket(p), [x, y], f) == eval_jet(p, [bracket(x, y)], f)


@given(jets1, jets1, fields, fields, fields)
def test_operator_composition_matches_concrete(op, arg, x, y, f):
    composed = apply_operator(op, arg, [0], [1], 2)
    assert eval_jet(composed, [x, y], f) == eval_jet(op, [x], eval_jet(arg, [y], f))


def test_lie_template():
    assert lie_template(Scalar(0)) == J({(0, 1): 1})
    x, f = CPoly({2: 1}), CPoly({1: 1})
    assert eval_jet(lie_template(Scalar(1)), [x], f) == CPoly({2: 3})
