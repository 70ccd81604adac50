from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vectdef.scalar import LAMBDA, Scalar, parse_weight
from vectdef.tpoly import Ideal, Param, TPoly, normalize, proportional, same_span, tvar


def test_param_names_round_trip():
    for name in ("t[1,3]", "ttilde[0,1]", "t[l,l+2]", "t[a1,a1+6]", "t[-7/2-1/2*sqrt(39),1/2-1/2*sqrt(39)]"):
        assert Param.parse(name).name == name
    with pytest.raises(ValueError):
        Param.parse("s[1,2]")


def test_param_shift_and_relabel():
    p = Param.parse("t[l,l+4]")
    assert p.shift == Scalar(4)
    assert p.shifted(-LAMBDA) == Param(Scalar(0), Scalar(4))


def test_normalize_clears_content_and_sign():
    p = tvar("t[1,3]") * tvar("t[3,3]").scale(-6) + tvar("t[1,3]") * tvar("t[1,1]").scale(6)
    assert normalize(p) == tvar("t[1,1]") * tvar("t[1,3]") - tvar("t[1,3]") * tvar("t[3,3]")
    assert normalize(p.scale(Fraction(-1, 7))) == normalize(p)


def test_normalize_removes_l_content():
    p = tvar("t[l,l]").scale(LAMBDA + 2) - tvar("t[l+2,l+2]").scale(LAMBDA + 2)
    assert normalize(p) == tvar("t[l,l]") - tvar("t[l+2,l+2]")


def test_normalize_surd_coefficients():
    r = parse_weight("a1")
    p = tvar("t[1,1]").scale(r) + tvar("t[2,2]").scale(r * 3)
    assert normalize(p) == tvar("t[1,1]") + tvar("t[2,2]").scale(3)


def test_proportional():
    p = tvar("t[1,3]") * tvar("t[3,5]")
    assert proportional(p.scale(60), p) == Scalar(60)
    assert proportional(p, p + tvar("t[1,1]") * tvar("t[1,5]")) is None


def test_ideal_membership_and_normal_form():
    g = tvar("t[1,3]") * (tvar("t[1,1]") - tvar("t[3,3]"))
    ideal = Ideal([g])
    assert g * tvar("t[5,5]") in ideal
    assert tvar("t[1,3]") * tvar("t[1,1]") not in ideal
    nf = ideal.normal_form(tvar("t[1,3]") * tvar("t[1,1]"))
    assert nf - tvar("t[1,3]") * tvar("t[1,1]") in ideal
    assert not ideal.add(g.scale(3))


def test_ideal_equality_differs_from_span_equality():
    a = tvar("t[0,0]") * tvar("t[0,4]") - tvar("t[0,4]") * tvar("t[4,4]")
    b = tvar("t[0,1]") * tvar("t[1,4]")
    assert Ideal([a, b]).same_generated(Ideal([a + b, b]))
    assert not Ideal([a]).same_generated(Ideal([b]))
    assert same_span([a, b], [a + b, a - b])


def test_evaluate_and_json():
    p = tvar("t[1,1]") * tvar("t[1,3]").scale(Fraction(1, 5)) + tvar("ttilde[0,1]")
    values = {Param.parse("t[1,1]"): Scalar(2), Param.parse("t[1,3]"): Scalar(5),
              Param.parse("ttilde[0,1]"): Scalar(-1)}
    assert p.evaluate(values) == Scalar(1)
    assert TPoly.from_json(p.to_json()) == p


small = st.integers(-5, 5)
names = st.sampled_from(["t[0,0]", "t[0,1]", "t[1,1]", "t[1,3]", "t[3,3]"])
polys = st.lists(st.tuples(names, names, small), min_size=1, max_size=4).map(
    lambda ts: sum(((tvar(a) * tvar(b)).scale(c) for a, b, c in ts), TPoly()))


@given(polys, st.fractions(min_value=-9, max_value=9, max_denominator=7).filter(bool))
def test_normalize_is_scale_invariant(p, s):
    assert normalize(p.scale(s)) == normalize(p)


@given(polys, polys)
def test_ideal_contains_its_generators_times_monomials(p, q):
    if not p:
        return
    ideal = Ideal([p])
    assert p * tvar("t[3,3]") in ideal
    assert (p * q) in ideal
