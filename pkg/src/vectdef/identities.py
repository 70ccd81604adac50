"""Checks of cup-product identities, coboundary witnesses and derived constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .catalog import (A1, A2, class_recipe, cocycle, declared_classes, entry, entry_keys,
                      recipe_value)
from .cochains import Cochain1, Cochain2, coboundary1, coboundary2, cup
from .deformation import block_conditions
from .jets import JetPoly
from .published import PUBLISHED_BLOCKS, PublishedBlock
from .scalar import CONSTANTS, LAMBDA, ONE, ZERO, QuadExt, Scalar, parse_weight, weight_text
from .solver import decompose, is_coboundary
from .tpoly import Param, TPoly, normalize, proportional, same_span


def _w(weight) -> Scalar:
    if weight is None:
        return LAMBDA
    return parse_weight(weight) if isinstance(weight, str) else Scalar.coerce(weight)


# ------------------------------------------------------------ recipes

@dataclass
class RecipeCheck:
    key: str
    weight: str
    display_closed: bool
    recipe_closed: bool
    recipe_nontrivial: bool
    factor: Scalar | None        # display = factor * recipe + coboundary, when it exists
    witness: Cochain1 | None

    @property
    def ok(self) -> bool:
        return self.display_closed and self.recipe_closed and self.recipe_nontrivial and \
            self.factor is not None and self.factor == ONE

    def to_json(self) -> dict:
        return {"key": self.key, "weight": self.weight, "displayClosed": self.display_closed,
                "recipeClosed": self.recipe_closed, "recipeNontrivial": self.recipe_nontrivial,
                "factor": None if self.factor is None else self.factor.pretty(),
                "witness": None if self.witness is None else self.witness.body.to_json()}


def verify_recipes(keys: Iterable[str] | None = None) -> list[RecipeCheck]:
    """Compare each printed 2-cocycle with the cup product that defines it."""
    out = []
    for key in keys or entry_keys():
        e = entry(key)
        if e.kind != "cocycle2" or e.recipe is None:
            continue
        disp = e.instantiate()
        rec = recipe_value(e)
        dec = decompose(disp, [("recipe", rec)], certificate=False)
        out.append(RecipeCheck(
            key, weight_text(disp.weight),
            not coboundary2(disp).body, not coboundary2(rec).body,
            not is_coboundary(rec),
            dec.coords["recipe"] if dec.ok else None,
            dec.witness if dec.ok else None))
    return out


# --------------------------------------------------- exact identities

@dataclass
class ExactIdentity:
    id: str
    holds: bool
    lhs: str
    rhs: str

    def to_json(self) -> dict:
        return {"id": self.id, "holds": self.holds, "lhs": self.lhs, "rhs": self.rhs}


def _cup_at(w: Scalar, outer: tuple, inner: tuple) -> Cochain2:
    (o1, k1, t1), (o2, k2, t2) = outer, inner
    return cup(cocycle(w + o1, k1, t1), cocycle(w + o2, k2, t2))


def low_shift_identities() -> list[ExactIdentity]:
    """Cup products of shift 1 and 2 that equal the printed classes on the nose."""
    out = []
    om01 = entry("Omega[0,1]").instantiate()
    zero = Scalar(0)
    cases = [
        ("[[C11,C01]] = Omega01", _cup_at(zero, (1, 0, False), (0, 1, False)), om01),
        ("-[[C01,C00]] = Omega01", -_cup_at(zero, (0, 1, False), (0, 0, False)), om01),
        ("[[Ctilde01,C00]] = Omega01", _cup_at(zero, (0, 1, True), (0, 0, False)), om01),
    ]
    om2 = entry("Omega[l,l+2]").instantiate()
    cases += [
        ("[[C(l,l+2),C(l,l)]] = Omega(l,l+2)", _cup_at(LAMBDA, (0, 2, False), (0, 0, False)), om2),
        ("-[[C(l+2,l+2),C(l,l+2)]] = Omega(l,l+2)", -_cup_at(LAMBDA, (2, 0, False), (0, 2, False)), om2),
    ]
    for name, lhs, rhs in cases:
        out.append(ExactIdentity(name, lhs.body == rhs.body, lhs.render(), rhs.render()))
    return out


# ------------------------------------------------------ witness claims

@dataclass(frozen=True)
class WitnessClaim:
    """cup(outer, inner) = sum expected[key] * class[key] + d(witness) on one block.

    ``outer`` and ``inner`` are (offset from the block source, shift, tilde);
    ``weight`` is the block source (None for the generic family).  Class keys
    refer to the block's recipe classes.
    """
    id: str
    weight: str | None
    outer: tuple
    inner: tuple
    expected: tuple = ()          # ((class key, coordinate text), ...)
    witness: str | None = None    # catalog key of the printed witness
    note: str = ""

    @property
    def source(self) -> Scalar:
        return _w(self.weight)

    def cup(self) -> Cochain2:
        return _cup_at(self.source, self.outer, self.inner)

    def expected_coords(self) -> dict[str, Scalar]:
        return {k: _coord(v) for k, v in self.expected}


def _coord(text) -> Scalar:
    if isinstance(text, Scalar):
        return text
    if isinstance(text, str) and text in CONSTANTS:
        return Scalar.coerce(CONSTANTS[text])
    return Scalar.coerce(Fraction(text))


@dataclass
class ClaimResult:
    claim: WitnessClaim
    coords: dict[str, Scalar] | None
    coords_match: bool
    witness: Cochain1 | None
    witness_matches: bool | None     # None when no witness is printed
    singular_weights: list[QuadExt]

    @property
    def ok(self) -> bool:
        return self.coords_match and self.witness_matches is not False

    def to_json(self) -> dict:
        return {
            "id": self.claim.id,
            "coords": None if self.coords is None else {k: v.pretty() for k, v in sorted(self.coords.items())},
            "expected": {k: v.pretty() for k, v in sorted(self.claim.expected_coords().items())},
            "coordsMatch": self.coords_match,
            "witness": None if self.witness is None else self.witness.body.to_json(),
            "witnessMatches": self.witness_matches,
            "singularWeights": [r.to_text() for r in self.singular_weights],
        }


def block_basis(weight, shift: int) -> list[tuple[str, Cochain2]]:
    """Recipe classes for the block, generic keys renamed to the block's weights."""
    return declared_classes(weight, shift)


def check_claim(claim: WitnessClaim) -> ClaimResult:
    om = claim.cup()
    w, k = om.weight, om.shift
    basis = block_basis(w, k)
    dec = decompose(om, basis, certificate=False)
    if not dec.ok:
        return ClaimResult(claim, None, False, None, None if claim.witness is None else False,
                           dec.singular_weights)
    expected = claim.expected_coords()
    coords = {key: c for key, c in dec.coords.items()}
    match = all(coords.get(key, ZERO) == expected.get(key, ZERO) for key in set(coords) | set(expected))
    wit_ok = None
    if claim.witness is not None:
        e = entry(claim.witness)
        printed = e.instantiate(None if e.weight is not None else w)
        wit_ok = not coboundary1(printed - dec.witness).body
    return ClaimResult(claim, coords, match, dec.witness, wit_ok, dec.singular_weights)


WITNESS_CLAIMS: list[WitnessClaim] = [
    # shift 4
    WitnessClaim("k4-chain", None, (2, 2, False), (0, 2, False), (), "b[l,l+4]"),
    WitnessClaim("k4-diag-left", None, (0, 4, False), (0, 0, False), (("Omega[l,l+4]", "1"),)),
    WitnessClaim("k4-diag-right", None, (4, 0, False), (0, 4, False), (("Omega[l,l+4]", "-1"),)),
    WitnessClaim("k4-0-plain", "0", (1, 3, False), (0, 1, False), (), "btilde[0,4]",
                 "printed twice with the tilde; the plain cocycle is the coboundary"),
    WitnessClaim("k4-0-tilde", "0", (1, 3, False), (0, 1, True), (("Omega[l,l+4]", "1/10"),)),
    WitnessClaim("k4-(-3)-plain", "-3", (3, 1, False), (0, 3, False), (), "btilde[-3,1]",
                 "printed as [[C14,Ctilde01]]; read as the plain cup at -3"),
    WitnessClaim("k4-(-3)-tilde", "-3", (3, 1, True), (0, 3, False), (("Omega[l,l+4]", "-1/10"),)),
    # shift 5, generic and at -2
    WitnessClaim("k5-chain2", None, (2, 3, False), (0, 2, False), (), "b[l,l+5]"),
    WitnessClaim("k5-chain3", None, (3, 2, False), (0, 3, False), (), "btilde[l,l+5]"),
    WitnessClaim("k5-(-2)-chain2", "-2", (2, 3, False), (0, 2, False), (), "b[-2,3]"),
    WitnessClaim("k5-(-2)-chain3", "-2", (3, 2, False), (0, 3, False), (), "btilde[-2,3]"),
    # shift 5 at 0
    WitnessClaim("k5-0-plain", "0", (1, 4, False), (0, 1, False),
                 (("Omega[0,5]", "-12"),), "b[0,5]"),
    WitnessClaim("k5-0-tilde", "0", (1, 4, False), (0, 1, True),
                 (("Omega[0,5]", "-12"), ("Omegatilde[0,5]", "2/5")), "btilde[0,5]"),
    WitnessClaim("k5-0-diag", "0", (0, 5, False), (0, 0, False),
                 (("Omega[0,5]", "30"), ("Omegatilde[0,5]", "-1")), "bbar[0,5]"),
    # shift 5 at -4
    WitnessClaim("k5-(-4)-tilde", "-4", (4, 1, True), (0, 4, False),
                 (("Omega[-4,1]", "-12"), ("Omegatilde[-4,1]", "2/5")), "btilde[-4,1]"),
    WitnessClaim("k5-(-4)-plain", "-4", (4, 1, False), (0, 4, False),
                 (("Omega[-4,1]", "-12"),), "b[-4,1]"),
    WitnessClaim("k5-(-4)-diag", "-4", (0, 5, False), (0, 0, False),
                 (("Omega[-4,1]", "30"), ("Omegatilde[-4,1]", "-1")), "bbar[-4,1]"),
    # shift 6, generic, both readings of the prefactor
    WitnessClaim("k6-chain2", None, (2, 4, False), (0, 2, False), (), "b[l,l+6]"),
    WitnessClaim("k6-chain3", None, (3, 3, False), (0, 3, False), (), "btilde[l,l+6]"),
    WitnessClaim("k6-chain4", None, (4, 2, False), (0, 4, False), (), "bbar[l,l+6]"),
    WitnessClaim("k6-chain2-mul", None, (2, 4, False), (0, 2, False), (), "b[l,l+6]@mul"),
    WitnessClaim("k6-chain3-mul", None, (3, 3, False), (0, 3, False), (), "btilde[l,l+6]@mul"),
    WitnessClaim("k6-chain4-mul", None, (4, 2, False), (0, 4, False), (), "bbar[l,l+6]@mul"),
]


def witness_claims() -> list[ClaimResult]:
    return [check_claim(c) for c in WITNESS_CLAIMS]


# ---------------------------------------------- constants left implicit

@dataclass
class ResonantSixConstants:
    """Class coordinates of the shift-6 cups at a_i (recipe basis)."""
    weight: str
    R: Scalar
    S: Scalar
    T: Scalar
    tilde_coords: tuple[Scalar, Scalar, Scalar]       # Omegatilde coordinate of each cup
    witnesses_proportional: tuple[bool, bool, bool]  # witness = c X^(5)f'' modulo 1-cocycles
    witness_factors: tuple

    def to_json(self) -> dict:
        return {"weight": self.weight, "R": self.R.pretty(), "S": self.S.pretty(),
                "T": self.T.pretty(), "tildeCoords": [c.pretty() for c in self.tilde_coords],
                "witnessesProportional": list(self.witnesses_proportional),
                "witnessFactors": [None if f is None else f.pretty() for f in self.witness_factors]}


def _proportional_mod_cocycles(wit: Cochain1, shape: Cochain1) -> Scalar | None:
    """c with d(wit - c shape) = 0, if any."""
    dw = coboundary1(wit)
    ds = coboundary1(shape)
    if not ds.body:
        return ZERO if not dw.body else None
    mono = next(iter(ds.body.terms))
    c = dw.body.coeff(mono) / ds.body.coeff(mono)
    return c if (dw - ds.scale(c)).body == JetPoly.zero(2) else None


def resonant_six_constants() -> list[ResonantSixConstants]:
    out = []
    for i, a in ((1, A1), (2, A2)):
        basis = block_basis(a, 6)
        keys = [k for k, _ in basis]
        om_key = next(k for k in keys if k.startswith("Omega["))
        omt_key = next(k for k in keys if k.startswith("Omegatilde["))
        cups = [_cup_at(a, (0, 6, False), (0, 0, False)),
                _cup_at(a, (2, 4, False), (0, 2, False)),
                _cup_at(a, (4, 2, False), (0, 4, False))]
        decs = [decompose(c, basis, certificate=False) for c in cups]
        shape = Cochain1(a, 6, JetPoly(1, {(5, 2): ONE}))
        factors = tuple(_proportional_mod_cocycles(d.witness, shape) for d in decs)
        out.append(ResonantSixConstants(
            f"a{i}",
            -decs[0].coords[om_key], decs[1].coords[om_key], -decs[2].coords[om_key],
            tuple(d.coords[omt_key] for d in decs),
            tuple(f is not None for f in factors), factors))
    return out


def galois_conjugate(x: Scalar) -> Scalar:
    return x.conj()


@dataclass
class ShiftSevenCoefficient:
    coefficient: Scalar            # of [[C(l+4,l+7),C(l,l+4)]] along Omega(l,l+7)
    witness: Cochain1
    expected: Scalar

    @property
    def ok(self) -> bool:
        return self.coefficient == self.expected


def shift_seven_coefficient() -> ShiftSevenCoefficient:
    w = LAMBDA
    basis = [("Omega[l,l+7]", class_recipe(w, 7))]
    dec = decompose(_cup_at(w, (4, 3, False), (0, 4, False)), basis, certificate=False)
    expected = (1 - 2 * LAMBDA) / (2 * LAMBDA + 13)
    return ShiftSevenCoefficient(dec.coords["Omega[l,l+7]"], dec.witness, expected)


def shift_seven_witness() -> Cochain1:
    return shift_seven_coefficient().witness


# -------------------------------------------------- block comparisons

@dataclass
class BlockComparison:
    id: str
    block: str
    mode: str
    matches: bool
    derived: list[str]
    published: list[str]
    factors: list[str] = field(default_factory=list)    # proportionality factors, derived/published

    def to_json(self) -> dict:
        return {"id": self.id, "block": self.block, "mode": self.mode, "matches": self.matches,
                "derived": self.derived, "published": self.published, "factors": self.factors}


def derived_symbols() -> dict[str, Scalar]:
    """Values of the constants a printed condition leaves symbolic."""
    syms = {}
    for i, c in enumerate(resonant_six_constants(), start=1):
        syms[f"R{i}"], syms[f"S{i}"], syms[f"T{i}"] = c.R, c.S, c.T
    return syms


def compare_block(pub: PublishedBlock, symbols: dict | None = None) -> BlockComparison:
    w = pub.source()
    analysis = block_conditions(w, pub.shift)
    derived = analysis.conditions
    printed = pub.polys(symbols)
    factors = []
    if pub.compare == "exact":
        d = sorted(c.render() for c in derived)
        p = sorted(normalize(c).render() for c in printed)
        ok = d == p
    elif pub.compare == "ideal":
        ok = same_span(derived, printed)
    else:
        ok = len(derived) == len(printed)
        remaining = list(derived)
        for q in printed:
            hit = None
            for d in remaining:
                r = proportional(d, q)
                if r is not None:
                    hit = (d, r)
                    break
            if hit is None:
                ok = False
                factors.append("none")
            else:
                remaining.remove(hit[0])
                factors.append(hit[1].pretty())
    from .deformation import block_text
    return BlockComparison(pub.id, block_text((w, pub.shift)), pub.compare, ok,
                           [c.render() for c in derived], [c.render() for c in printed], factors)


def compare_published(blocks: Sequence[PublishedBlock] = PUBLISHED_BLOCKS) -> list[BlockComparison]:
    syms = derived_symbols() if any(b.symbols for b in blocks) else {}
    return [compare_block(b, syms) for b in blocks]


# ------------------------------------------------- singular weights

@dataclass
class SingularWeightReport:
    shift: int
    candidates: list[QuadExt]
    differing: list[QuadExt]

    def to_json(self) -> dict:
        return {"shift": self.shift, "candidates": [c.to_text() for c in self.candidates],
                "differing": [c.to_text() for c in self.differing]}


_SPECIAL_SOURCES = {1: [0], 5: [0, -4], 6: [A1, A2]}


def _specialize_condition(c: TPoly, value: QuadExt) -> TPoly:
    def fn(p: Param) -> Param:
        return Param(Scalar.coerce(p.source.eval_at(value)), Scalar.coerce(p.target.eval_at(value)), p.tilde)
    terms = {}
    for mono, coeff in c.terms.items():
        m = tuple(sorted((fn(p) for p in mono), key=Param.sort_key))
        terms[m] = Scalar.coerce(coeff.eval_at(value))
    return TPoly(terms)


def singular_weight_analysis(shift: int) -> SingularWeightReport:
    """Weights where the shift-k conditions differ from the generic ones specialized there."""
    generic = block_conditions(LAMBDA, shift)
    cands: set = set(generic.singular_weights)
    # a chain piece of special shift k_s starting at s occurs when s = l + j
    for k_s, sources in _SPECIAL_SOURCES.items():
        for s in sources:
            for j in range(shift - k_s + 1):
                cands.add(QuadExt.coerce(s.const_value() if isinstance(s, Scalar) else Fraction(s)) - j)
    cands_sorted = sorted(cands, key=lambda r: r.sort_key())
    differing = []
    for v in cands_sorted:
        spec = [normalize(_specialize_condition(c, v)) for c in generic.conditions]
        spec = [c for c in spec if c]
        here = block_conditions(Scalar.coerce(v), shift).conditions
        if not (same_span(spec, here) and len(spec) == len(here)):
            differing.append(v)
    return SingularWeightReport(shift, cands_sorted, differing)


__all__ = [
    "RecipeCheck", "verify_recipes", "ExactIdentity", "low_shift_identities", "WitnessClaim",
    "WITNESS_CLAIMS", "ClaimResult", "check_claim", "witness_claims", "ResonantSixConstants",
    "resonant_six_constants", "ShiftSevenCoefficient", "shift_seven_coefficient",
    "shift_seven_witness", "BlockComparison", "compare_block", "compare_published",
    "derived_symbols", "SingularWeightReport", "singular_weight_analysis", "block_basis",
]
