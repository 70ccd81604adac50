import pytest

from vectdef.catalog import (CatalogError, catalog_hash, cocycle, declared_classes, entry, export_json,
                             families_at, resolve, table1_keys)
from vectdef.cochains import coboundary1, coboundary2
from vectdef.deformation import block_conditions
from vectdef.identities import (derived_symbols, resonant_six_constants, shift_seven_coefficient,
                                singular_weight_analysis, verify_recipes)
from vectdef.jets import JetPoly
from vectdef.published import PUBLISHED_BLOCKS, parse_condition, published_block
from vectdef.scalar import LAMBDA, Scalar, parse_weight
from vectdef.solver import is_coboundary
from vectdef.tpoly import normalize, proportional


def test_table1_has_ten_entries_in_nine_families():
    keys = table1_keys()
    assert len(keys) == 10
    assert {k.split("[")[0] for k in keys} == {"C", "Ctilde"}


def test_families_at_weight_zero_shift_one():
    keys = sorted(k for k, _ in families_at(Scalar(0), 1))
    assert keys == ["C[0,1]", "Ctilde[0,1]"]
    assert families_at(Scalar(1), 1) == []
    assert len(families_at(parse_weight("a2"), 6)) == 1


def test_cocycle_bodies():
    assert cocycle(LAMBDA, 0).body == JetPoly(1, {(1, 0): 1})
    assert cocycle(Scalar(0), 1).body == JetPoly(1, {(2, 0): 1})


def test_resolve_family_at_a_weight():
    b = resolve("b[1,5]")
    assert b.weight == Scalar(1) and b.shift == 4
    assert b.body == JetPoly(1, {(5, 0): Scalar(0), (4, 1): Scalar(-2)})


def test_resolve_unknown_key():
    with pytest.raises(CatalogError):
        resolve("Q[0,1]")
    with pytest.raises(CatalogError):
        entry("C[0,5]").instantiate(Scalar(1))


def test_export_is_deterministic():
    assert export_json("C[l,l+4]") == export_json("C[l,l+4]")
    assert export_json("Omega[0,5]")["key"] == "Omega[0,5]"
    assert len(catalog_hash()) == 16


def test_displayed_classes_closed_except_shift_three():
    for key in ("Omega[0,1]", "Omega[l,l+2]", "Omega[l,l+4]", "Omega[0,5]", "Omegatilde[-4,1]",
                "Omega[a1,a1+6]", "Omegatilde[a2,a2+6]"):
        om = entry(key).instantiate()
        assert not coboundary2(om).body, key
        assert not is_coboundary(om), key
    assert coboundary2(entry("Omega[l,l+3]").instantiate()).body


def test_recipe_factors():
    checks = {r.key: r for r in verify_recipes()}
    assert checks["Omega[0,1]"].ok and checks["Omega[l,l+2]"].ok and checks["Omega[l,l+4]"].ok
    for key in ("Omega[0,5]", "Omegatilde[0,5]", "Omega[a1,a1+6]", "Omegatilde[a2,a2+6]"):
        assert checks[key].factor == Scalar(-1), key


def test_declared_classes_at_shift_seven_and_eight():
    assert [k for k, _ in declared_classes(Scalar(1), 7)] == ["Omega[1,8]"]
    assert [k for k, _ in declared_classes(Scalar(0), 9)] == ["Omega[0,9]"]
    assert declared_classes(Scalar(2), 9) == []


def test_printed_witness_is_a_cocycle_correction_away():
    from vectdef.cochains import cup
    om = cup(cocycle(LAMBDA + 2, 2), cocycle(LAMBDA, 2))
    assert coboundary1(resolve("b[l,l+4]")).body == om.body


# ---------------------------------------------------------- printed tables

def test_parse_condition():
    p = parse_condition("(2*l+13)*t[l,l+3]*t[l+3,l+7] + (1-2*l)*t[l,l+4]*t[l+4,l+7]")
    assert len(p.terms) == 2
    with pytest.raises(ValueError):
        parse_condition("t[0,1]*")


def test_symbols_required_when_used():
    block = published_block("k6-a1")
    with pytest.raises(ValueError):
        block.polys({})
    assert len(block.polys(derived_symbols())) == 2


def test_shift_eight_condition_at_minus_seven():
    derived = block_conditions(Scalar(-7), 8).conditions
    printed = parse_condition("60*t[-7,-3]*t[-3,1] + t[-7,-4]*t[-4,1]")
    table = parse_condition("t[-3,1]*t[-7,-3] + 1/60*t[-4,1]*t[-7,-4]")
    assert len(derived) == 1
    assert proportional(normalize(derived[0]), normalize(printed)) is not None
    assert proportional(table, printed) == Scalar(1) / 60


def test_shift_seven_table_at_minus_two():
    derived = block_conditions(Scalar(-2), 7).conditions
    table = parse_condition("-9/4*t[-2,0]*t[0,5] + 9/5*t[-2,1]*t[1,5] + t[-2,2]*t[2,5]")
    assert len(derived) == 1 and proportional(derived[0], table) is not None


def test_shift_seven_coefficient():
    r = shift_seven_coefficient()
    assert r.ok and r.coefficient == (1 - 2 * LAMBDA) / (2 * LAMBDA + 13)


def test_resonant_six_constants_are_conjugate():
    c1, c2 = resonant_six_constants()
    for a, b in ((c1.R, c2.R), (c1.S, c2.S), (c1.T, c2.T)):
        assert a.conj() == b
    assert c1.R == parse_weight("35/2*sqrt(19)")
    assert c1.S == parse_weight("-41/2+19/4*sqrt(19)")
    assert c1.T == parse_weight("41/2+19/4*sqrt(19)")


def test_generic_blocks_match_exactly():
    for block_id in ("k1-0", "k2-generic", "k3-generic"):
        pub = published_block(block_id)
        derived = block_conditions(pub.source(), pub.shift).conditions
        assert [normalize(p) for p in pub.polys()] == derived


def test_singular_weights_at_shift_five():
    rep = singular_weight_analysis(5)
    assert sorted(r.to_text() for r in rep.differing) == ["-4", "0"]


def test_published_ids_unique():
    ids = [b.id for b in PUBLISHED_BLOCKS]
    assert len(ids) == len(set(ids))
