import random
from fractions import Fraction

import pytest

from vectdef.catalog import entry
from vectdef.deformation import (SymbolSpace, block_conditions, build_infinitesimal, check_deformation_at_point,
                                 derive_conditions, enumerate_component_solutions, higher_order_analysis,
                                 linear_factors, maurer_cartan_rhs, parse_assignment,
                                 second_order_factor_search, shift_invariance_check, solves_order)
from vectdef.published import parse_condition
from vectdef.scalar import LAMBDA, Scalar
from vectdef.tpoly import Param, TPoly, normalize, same_span, tvar


def names(series):
    return [p.name for p in series.params.params]


def test_infinitesimal_terms():
    assert names(build_infinitesimal(SymbolSpace.parse("n=2,delta=3"))) == ["t[1,1]", "t[1,3]", "t[2,2]", "t[3,3]"]
    assert len(build_infinitesimal(SymbolSpace.parse("n=3,delta=4")).params.params) == 7
    full = names(build_infinitesimal(SymbolSpace.parse("n=3,delta=3")))
    printed = names(build_infinitesimal(SymbolSpace.parse("n=3,delta=3"), [Param.parse("t[1,3]")]))
    assert len(printed) == 8 and "ttilde[0,1]" in printed
    assert sorted(full) == sorted(printed + ["t[1,3]"])


def test_space_parsing():
    assert SymbolSpace.parse("n=2,delta=l+3").components == [LAMBDA + 1, LAMBDA + 2, LAMBDA + 3]
    with pytest.raises(ValueError):
        SymbolSpace.parse("n=2")
    with pytest.raises(ValueError):
        SymbolSpace(-1, Scalar(0))


def test_order_two_block_zero_one():
    series = build_infinitesimal(SymbolSpace.parse("n=3,delta=3"))
    block = maurer_cartan_rhs(series, 2)[(Scalar(0), 1)]
    om = entry("Omega[0,1]").instantiate().body
    expected = {("t[0,1]", "t[1,1]"): -om, ("t[1,1]", "ttilde[0,1]"): -om, ("t[0,0]", "t[0,1]"): om}
    got = {tuple(sorted(p.name for p in m)): body for m, body in block.items()}
    assert got == {tuple(sorted(k)): v for k, v in expected.items()}


def test_diagonal_blocks_vanish():
    series = build_infinitesimal(SymbolSpace.parse("n=4,delta=5"))
    rhs = maurer_cartan_rhs(series, 2)
    assert all(shift > 0 for _, shift in rhs)


def test_conditions_of_the_examples():
    rep = derive_conditions(SymbolSpace.parse("n=2,delta=3"))
    assert [c.render() for c in rep.conditions] == [normalize(parse_condition("t[1,1]*t[1,3] - t[1,3]*t[3,3]")).render()]
    generic = block_conditions(LAMBDA, 2).conditions
    assert generic == [normalize(parse_condition("t[l,l]*t[l,l+2] - t[l,l+2]*t[l+2,l+2]"))]


def test_second_order_terms():
    assert not higher_order_analysis(SymbolSpace.parse("n=2,delta=3"), 2).series.order(2)
    rep = higher_order_analysis(SymbolSpace.parse("n=4,delta=5"), 2)
    assert solves_order(rep.series, 2, rep.series.order(2), rep.ideal) == []


def test_printed_second_order_factor():
    trials = {t.factor: t for t in second_order_factor_search(SymbolSpace.parse("n=4,delta=5"))}
    assert trials[Scalar(-1)].valid
    assert not trials[Scalar(Fraction(1, 2))].valid
    assert not trials[Scalar(1)].valid


def test_higher_orders_of_s45():
    rep = higher_order_analysis(SymbolSpace.parse("n=4,delta=5"), 4)
    assert rep.terminated and rep.last_nonzero_order == 3
    order4 = next(o for o in rep.orders if o.order == 4)
    assert order4.rhs_vanishes and not order4.term
    order3 = next(o for o in rep.orders if o.order == 3)
    cond6 = normalize(parse_condition("t[1,1]*t[1,3]*t[3,5] - t[1,3]*t[3,5]*t[5,5]"))
    assert (cond6, True) in order3.raw_conditions


def test_s34_terminates_at_order_one():
    rep = higher_order_analysis(SymbolSpace.parse("n=3,delta=4"), 4)
    assert rep.terminated and rep.last_nonzero_order == 1
    assert all(o.rhs_vanishes for o in rep.orders if o.order > 2)


# ------------------------------------------------------------- branches

def test_linear_factors():
    p = tvar("t[1,3]") * (tvar("t[1,1]") - tvar("t[3,3]"))
    assert linear_factors(p) == [tvar("t[1,3]"), tvar("t[1,1]") - tvar("t[3,3]")]
    assert linear_factors(tvar("t[1,3]") * tvar("t[3,5]") + tvar("t[1,1]") * tvar("t[1,5]")) is None


def test_branch_counts():
    one = [normalize(parse_condition("t[1,1]*t[1,3] - t[1,3]*t[3,3]"))]
    params = build_infinitesimal(SymbolSpace.parse("n=2,delta=3")).params.params
    assert len(enumerate_component_solutions(one, params).branches) == 2
    assert len(enumerate_component_solutions([], params).branches) == 1
    rep = derive_conditions(SymbolSpace.parse("n=3,delta=4"))
    assert len(enumerate_component_solutions(rep.conditions, rep.series.params.params).branches) == 8


def test_all_equal_diagonal_branch_of_s45():
    rep = derive_conditions(SymbolSpace.parse("n=4,delta=5"))
    branches = enumerate_component_solutions(rep.conditions, rep.series.params.params).branches
    diag = [Param.parse(f"t[{i},{i}]") for i in range(1, 6)]
    equal = [TPoly.var(diag[0]) - TPoly.var(d) for d in diag[1:]]
    hits = [b for b in branches if same_span(b.equations, equal)]
    assert len(hits) == 1 and hits[0].free_parameters == 7


def test_unfactorable_conditions_are_flagged():
    p = normalize(parse_condition("t[1,3]*t[3,5] + t[1,1]*t[1,5]"))
    res = enumerate_component_solutions([p], [])
    assert res.unenumerated == [p]


# ------------------------------------------------------- point checks

def test_point_on_the_branch_passes():
    series = derive_conditions(SymbolSpace.parse("n=2,delta=3")).series
    point = parse_assignment({"t[1,1]": 1, "t[3,3]": 1, "t[1,3]": "5", "t[2,2]": "2/3"})
    res = check_deformation_at_point(series, point)
    assert res.passed and not res.concrete_failures


def test_zero_point_passes():
    series = higher_order_analysis(SymbolSpace.parse("n=4,delta=5"), 4).series
    assert check_deformation_at_point(series, {}).passed


def test_violating_point_fails_in_block_one_three():
    series = derive_conditions(SymbolSpace.parse("n=2,delta=3")).series
    res = check_deformation_at_point(series, parse_assignment({"t[1,1]": 1, "t[3,3]": 0, "t[1,3]": 1}), 2)
    assert not res.passed
    assert res.symbolic_failures[0]["order"] == 2 and res.symbolic_failures[0]["block"] == "(1,3)"
    assert res.concrete_failures and res.concrete_failures[0]["block"] == "(1,3)"


def test_unknown_parameter_rejected():
    series = derive_conditions(SymbolSpace.parse("n=2,delta=3")).series
    with pytest.raises(ValueError):
        check_deformation_at_point(series, parse_assignment({"t[0,9]": 1}))


def _violating_point(conditions, index, params, rng):
    for _ in range(5000):
        values = {p: Scalar(rng.randint(0, 2)) for p in params}
        if all(bool(c.evaluate(values)) == (i == index) for i, c in enumerate(conditions)):
            return values
    return None


@pytest.mark.parametrize("space,exclude", [("n=2,delta=3", ()), ("n=3,delta=4", ()),
                                           ("n=3,delta=3", ("t[1,3]",)), ("n=4,delta=5", ())])
def test_every_condition_is_necessary(space, exclude):
    rep = derive_conditions(SymbolSpace.parse(space), [Param.parse(x) for x in exclude])
    rng = random.Random(space)
    params = rep.series.params.params
    for i, cond in enumerate(rep.conditions):
        point = _violating_point(rep.conditions, i, params, rng)
        assert point is not None, cond.render()
        res = check_deformation_at_point(rep.series, point, 2)
        assert not res.passed and res.symbolic_failures[0]["order"] == 2, cond.render()


# ---------------------------------------------------- shift invariance

def test_shift_invariance_examples():
    assert all(r.matches for r in shift_invariance_check(2, 3))
    assert all(r.matches for r in shift_invariance_check(3, 4, samples=(Fraction(1, 3),)))
    assert all(r.matches for r in shift_invariance_check(0, 0))
    assert derive_conditions(SymbolSpace(0, LAMBDA)).conditions == []


def test_shift_invariance_fails_where_weight_zero_cocycles_enter():
    # S33 carries the weight-zero cocycles C[0,1], Ctilde[0,1]; S3 at l+3 does not
    assert not all(r.matches for r in shift_invariance_check(3, 3))

