"""Deformations of the vect(1)-action on symbol spaces S^n_delta.

A series term L^(m) is stored per block (source weight, shift) as a map from
parameter monomials to one-slot jet bodies, so that
``L^(m)_X f = sum_mono t^mono * body(X) f`` on the block.  Right-hand sides
of the Maurer-Cartan equation are stored the same way with two-slot bodies.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .catalog import declared_classes, entry, families_at
from .cochains import Cochain1, Cochain2, coboundary1, coboundary2
from .jets import JetPoly, apply_operator
from .scalar import QuadExt, Scalar, parse_weight, weight_text
from .solver import decompose
from .tpoly import Ideal, Param, TPoly, mono_key, mono_name, normalize

Block = tuple  # (source weight: Scalar, shift: int)
Blocks = dict  # Block -> {monomial: JetPoly}


class DeformationError(RuntimeError):
    pass


def block_text(block: Block) -> str:
    w, k = block
    return f"({weight_text(w)},{weight_text(w + k)})"


def _block_sort_key(block: Block):
    return (block[1], block[0].sort_key())


# ------------------------------------------------------------- spaces

@dataclass(frozen=True)
class SymbolSpace:
    """S^n_delta = F_delta + F_(delta-1) + ... + F_(delta-n)."""
    n: int
    delta: Scalar

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("symbol order must be non-negative")
        object.__setattr__(self, "delta", Scalar.coerce(self.delta))

    @classmethod
    def parse(cls, text: str) -> SymbolSpace:
        fields_ = dict(part.split("=", 1) for part in text.replace(" ", "").split(",") if part)
        try:
            return cls(int(fields_["n"]), parse_weight(fields_["delta"]))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"malformed space {text!r}; expected n=<int>,delta=<weight>") from exc

    @property
    def components(self) -> list[Scalar]:
        return [self.delta - (self.n - j) for j in range(self.n + 1)]

    @property
    def label(self) -> str:
        return f"S^{self.n}_{weight_text(self.delta)}"

    def admits(self, weight) -> bool:
        return Scalar.coerce(weight) in self.components


def _label(prefix: str, src: Scalar, tgt: Scalar) -> str:
    return f"{prefix}[{weight_text(src)},{weight_text(tgt)}]"


@dataclass
class ParamSet:
    """Deformation parameters of a space with their basic 1-cocycles."""
    entries: list[tuple[Param, Cochain1]]

    @classmethod
    def for_space(cls, space: SymbolSpace, exclude: Iterable[Param] = ()) -> ParamSet:
        skip = set(exclude)
        out = []
        comps = space.components
        for i, src in enumerate(comps):
            for tgt in comps[i:]:
                k = tgt - src
                shift = int(k.const_value().a)
                for key, c in families_at(src, shift):
                    p = Param(src, tgt, key.startswith("Ctilde"))
                    if p not in skip:
                        out.append((p, c))
        out.sort(key=lambda pc: pc[0].sort_key())
        return cls(out)

    @property
    def params(self) -> list[Param]:
        return [p for p, _ in self.entries]

    def cocycle_label(self, p: Param) -> str:
        return _label("Ctilde" if p.tilde else "C", p.source, p.target)

    def render(self) -> str:
        return " + ".join(f"{p.name}*{self.cocycle_label(p)}" for p in self.params)


# ------------------------------------------------------------- series

@dataclass
class DeformationSeries:
    space: SymbolSpace | None
    params: ParamSet
    terms: dict[int, Blocks] = field(default_factory=dict)

    def order(self, m: int) -> Blocks:
        return self.terms.get(m, {})

    @property
    def max_order(self) -> int:
        return max(self.terms, default=0)

    def block_term(self, m: int, block: Block) -> dict:
        return self.order(m).get(block, {})


def build_infinitesimal(space: SymbolSpace, exclude: Iterable[Param] = ()) -> DeformationSeries:
    ps = ParamSet.for_space(space, exclude)
    blocks: Blocks = defaultdict(dict)
    for p, c in ps.entries:
        blocks[(c.weight, c.shift)][(p,)] = c.body
    return DeformationSeries(space, ps, {1: dict(blocks)})


def _compose_antisym(outer: JetPoly, inner: JetPoly) -> JetPoly:
    """(X, Y) -> outer(X) inner(Y) - outer(Y) inner(X)."""
    return apply_operator(outer, inner, [0], [1], 2).antisymmetrize()


def _add_into(acc: dict, mono, body: JetPoly):
    if mono in acc:
        acc[mono] = acc[mono] + body
    else:
        acc[mono] = body


def _clean(blocks: Blocks) -> Blocks:
    out = {}
    for b, terms in blocks.items():
        t = {m: j for m, j in terms.items() if j}
        if t:
            out[b] = t
    return out


def maurer_cartan_rhs(series: DeformationSeries, m: int) -> Blocks:
    """-1/2 sum_{i+j=m} [[L^(i), L^(j)]] per block.

    Summing over ordered pairs, [[A, B]] + [[B, A]] produces every composable
    product twice, so the right-hand side is minus the sum of
    P(X) Q(Y) - P(Y) Q(X) over composable pairs with P from L^(i), Q from L^(j).
    """
    acc: dict = defaultdict(dict)
    for i in range(1, m):
        j = m - i
        for (sp, kp), pterms in series.order(i).items():
            for (sq, kq), qterms in series.order(j).items():
                if sp != sq + kq:
                    continue
                block = (sq, kq + kp)
                for mp, bp in pterms.items():
                    for mq, bq in qterms.items():
                        body = -_compose_antisym(bp, bq)
                        if body:
                            _add_into(acc[block], tuple(sorted(mp + mq, key=Param.sort_key)), body)
    return _clean(acc)


def coboundary_blocks(blocks: Blocks) -> Blocks:
    out = {}
    for (w, k), terms in blocks.items():
        out[(w, k)] = {m: coboundary1(Cochain1(w, k, b)).body for m, b in terms.items()}
    return _clean(out)


def subtract_blocks(a: Blocks, b: Blocks) -> Blocks:
    out: dict = defaultdict(dict)
    for blk, terms in a.items():
        for m, j in terms.items():
            _add_into(out[blk], m, j)
    for blk, terms in b.items():
        for m, j in terms.items():
            _add_into(out[blk], m, -j)
    return _clean(out)


def reduce_block(terms: Mapping, ideal: Ideal, nvf: int) -> dict:
    """Normal form of a TPoly-weighted jet expression, coefficientwise in the jets."""
    if not ideal.generators:
        return {m: j for m, j in terms.items() if j}
    by_jet: dict = defaultdict(dict)
    for mono, body in terms.items():
        for jm, c in body.terms.items():
            by_jet[jm][mono] = c
    out: dict = defaultdict(dict)
    for jm, coeffs in by_jet.items():
        nf = ideal.normal_form(TPoly(coeffs))
        for mono, c in nf.terms.items():
            out[mono][jm] = c
    return {m: JetPoly(nvf, t) for m, t in out.items() if t}


def reduce_blocks(blocks: Blocks, ideal: Ideal, nvf: int) -> Blocks:
    return _clean({b: reduce_block(t, ideal, nvf) for b, t in blocks.items()})


# ------------------------------------------------------- block analysis

@dataclass
class BlockAnalysis:
    block: Block
    basis: list[str]
    coords: dict                     # monomial -> {class key: Scalar}
    conditions: list[TPoly]          # normalized, one per class with a nonzero coefficient
    class_polys: dict                # class key -> raw TPoly coefficient
    witness: dict                    # monomial -> JetPoly (one slot)
    singular_weights: list[QuadExt]

    def to_json(self) -> dict:
        return {
            "block": block_text(self.block),
            "basis": self.basis,
            "classCoefficients": {k: p.to_json() for k, p in self.class_polys.items()},
            "conditions": [c.render() for c in self.conditions],
            "witness": {mono_name(m): j.to_json() for m, j in sorted(self.witness.items(),
                                                                    key=lambda mj: mono_key(mj[0]))},
            "singularWeights": [r.to_text() for r in self.singular_weights],
        }


def _class_basis(w: Scalar, k: int, cocycles: Sequence[tuple[object, Cochain2]]):
    """Independent classes for the block: declared ones first, then greedy from the inputs."""
    basis: list[tuple[str, Cochain2]] = []
    for key, om in declared_classes(w, k):
        if not decompose(om, basis, certificate=False).ok:
            basis.append((key, om))
    for mono, om in cocycles:
        if not decompose(om, basis, certificate=False).ok:
            basis.append((f"class<{mono_name(mono)}>", om))
    return basis


def analyze_block(block: Block, terms: Mapping, check_cocycle: bool = True) -> BlockAnalysis:
    """Decompose sum_mono t^mono * om_mono into classes plus a coboundary."""
    w, k = block
    items = sorted(terms.items(), key=lambda mj: mono_key(mj[0]))
    cocycles = []
    for mono, body in items:
        om = Cochain2(w, k, body)
        if check_cocycle and coboundary2(om).body:
            raise DeformationError(f"right-hand side on block {block_text(block)} at "
                                   f"{mono_name(mono)} is not a 2-cocycle")
        cocycles.append((mono, om))
    basis = _class_basis(w, k, cocycles)
    coords, witness = {}, {}
    polys: dict = {key: TPoly() for key, _ in basis}
    sing: set = set()
    for mono, om in cocycles:
        dec = decompose(om, basis, certificate=False)
        if not dec.ok:
            raise DeformationError(f"block {block_text(block)}: no decomposition for {mono_name(mono)}")
        coords[mono] = dec.coords
        sing.update(dec.singular_weights)
        if dec.witness.body:
            witness[mono] = dec.witness.body
        for key, c in dec.coords.items():
            if c:
                polys[key] = polys[key] + TPoly.monomial(mono, c)
    conditions = [normalize(p) for p in polys.values() if p]
    return BlockAnalysis(block, [key for key, _ in basis], coords, conditions,
                         {key: p for key, p in polys.items() if p}, witness,
                         sorted(sing, key=lambda r: r.sort_key()))


def block_obstruction(weight, shift: int, params: Iterable[Param] | None = None) -> dict:
    """B = sum over chains l -> l+j -> l+k of t t [[C_outer, C_inner]] (order-two obstruction).

    ``params`` restricts the chains to parameters of a given space; by default
    every basic 1-cocycle is available.
    """
    w = Scalar.coerce(weight)
    allowed = None if params is None else set(params)
    out: dict = {}
    for j in range(shift + 1):
        mid = w + j
        for ikey, inner in families_at(w, j):
            pin = Param(w, mid, ikey.startswith("Ctilde"))
            if allowed is not None and pin not in allowed:
                continue
            for okey, outer in families_at(mid, shift - j):
                pout = Param(mid, w + shift, okey.startswith("Ctilde"))
                if allowed is not None and pout not in allowed:
                    continue
                body = _compose_antisym(outer.body, inner.body)
                if body:
                    mono = tuple(sorted((pin, pout), key=Param.sort_key))
                    _add_into(out, mono, body)
    return {m: b for m, b in out.items() if b}


def block_conditions(weight, shift: int, params: Iterable[Param] | None = None) -> BlockAnalysis:
    """Second-order integrability conditions on one block."""
    w = Scalar.coerce(weight)
    return analyze_block((w, shift), block_obstruction(w, shift, params))


# ------------------------------------------------------ order by order

@dataclass
class OrderReport:
    order: int
    rhs: Blocks
    blocks: list[BlockAnalysis]
    new_conditions: list[TPoly]
    raw_conditions: list[tuple[TPoly, bool]]   # (unreduced condition, implied by the earlier ideal)
    term: Blocks

    @property
    def rhs_vanishes(self) -> bool:
        return not self.rhs

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "rhsVanishes": self.rhs_vanishes,
            "blocks": [b.to_json() for b in self.blocks],
            "newConditions": [c.render() for c in self.new_conditions],
            "rawConditions": [{"condition": c.render(), "implied": implied}
                              for c, implied in self.raw_conditions],
            "term": blocks_to_json(self.term),
        }


@dataclass
class IntegrabilityReport:
    space: SymbolSpace
    series: DeformationSeries
    orders: list[OrderReport]
    ideal: Ideal
    terminated: bool
    last_nonzero_order: int

    @property
    def conditions(self) -> list[TPoly]:
        return list(self.ideal.generators)

    def conditions_of_order(self, m: int) -> list[TPoly]:
        for rep in self.orders:
            if rep.order == m:
                return rep.new_conditions
        return []

    def to_json(self) -> dict:
        return {
            "space": self.space.label,
            "parameters": [p.name for p in self.series.params.params],
            "infinitesimal": self.series.params.render(),
            "orders": [o.to_json() for o in self.orders],
            "idealGenerators": [g.render() for g in self.ideal.generators],
            "terminated": self.terminated,
            "polynomialDegree": self.last_nonzero_order,
        }


def blocks_to_json(blocks: Blocks) -> dict:
    out = {}
    for b in sorted(blocks, key=_block_sort_key):
        out[block_text(b)] = {mono_name(m): j.to_json()
                              for m, j in sorted(blocks[b].items(), key=lambda mj: mono_key(mj[0]))}
    return out


def render_blocks(blocks: Blocks, antisymmetric: bool = False) -> dict[str, str]:
    out = {}
    for b in sorted(blocks, key=_block_sort_key):
        parts = []
        for m, j in sorted(blocks[b].items(), key=lambda mj: mono_key(mj[0])):
            body = j.render_antisymmetric() if antisymmetric else j.render()
            parts.append(f"{mono_name(m)}*({body})")
        out[block_text(b)] = " + ".join(parts)
    return out


def closure_conditions(block: Block, terms: Mapping) -> list[TPoly]:
    """Polynomials whose vanishing makes an unreduced right-hand side closed.

    Before reduction modulo lower-order conditions the right-hand side is
    only closed modulo them; each jet coefficient of its coboundary is a
    condition that the lower-order ideal must imply.
    """
    w, k = block
    by_jet: dict = defaultdict(dict)
    for mono, body in terms.items():
        for jm, c in coboundary2(Cochain2(w, k, body)).body.terms.items():
            by_jet[jm][mono] = c
    out = []
    for coeffs in by_jet.values():
        c = normalize(TPoly(coeffs))
        if c and c not in out:
            out.append(c)
    return sorted(out, key=lambda p: [mono_key(m) for m in p.terms])


def solve_order(series: DeformationSeries, m: int, ideal: Ideal) -> OrderReport:
    """Find the order-m conditions and a term L^(m) with dL^(m) = RHS_m modulo the ideal.

    ``ideal`` is extended in place with the new conditions.
    """
    raw_rhs = maurer_cartan_rhs(series, m)
    earlier = ideal.copy()
    rhs = reduce_blocks(raw_rhs, earlier, 2)
    analyses = [analyze_block(b, rhs[b]) for b in sorted(rhs, key=_block_sort_key)]
    raw = []
    if earlier.generators:
        for b in sorted(raw_rhs, key=_block_sort_key):
            for c in closure_conditions(b, raw_rhs[b]):
                raw.append((c, earlier.contains(c)))
    else:
        raw = [(c, False) for a in analyses for c in a.conditions]
    new = []
    for a in analyses:
        for c in a.conditions:
            if ideal.add(c):
                new.append(ideal.generators[-1])
    term_blocks = {a.block: a.witness for a in analyses if a.witness}
    term = reduce_blocks(term_blocks, ideal, 1)
    series.terms[m] = term
    return OrderReport(m, rhs, analyses, new, raw, term)


def higher_order_analysis(space: SymbolSpace, max_order: int = 4,
                          exclude: Iterable[Param] = ()) -> IntegrabilityReport:
    """Solve the Maurer-Cartan equation order by order.

    The series is polynomial of degree d once L^(m) = 0 for d < m <= 2d: every
    later right-hand side pairs at least one vanishing term.  Past ``max_order``
    the loop continues only while the terms stay zero, to settle termination.
    """
    series = build_infinitesimal(space, exclude)
    ideal = Ideal()
    reports = []
    last = 1
    terminated = False
    m = 2
    while m <= max(max_order, 2) or not reports[-1].term:
        rep = solve_order(series, m, ideal)
        reports.append(rep)
        if rep.term:
            last = m
        if m >= 2 * last:
            terminated = True
            break
        m += 1
    return IntegrabilityReport(space, series, reports, ideal, terminated, last)


def derive_conditions(space: SymbolSpace, exclude: Iterable[Param] = ()) -> IntegrabilityReport:
    """Second-order conditions only."""
    series = build_infinitesimal(space, exclude)
    ideal = Ideal()
    rep = solve_order(series, 2, ideal)
    return IntegrabilityReport(space, series, [rep], ideal, False, 2 if rep.term else 1)


# ------------------------------------------- printed second-order term

# witness families keyed by (inner shift, total shift) for generic chains, and
# by (inner weight, inner shift, total shift, tilde) for the special ones
_GENERIC_WITNESS = {(2, 4): "b[l,l+4]", (2, 5): "b[l,l+5]", (3, 5): "btilde[l,l+5]",
                    (2, 6): "b[l,l+6]", (3, 6): "btilde[l,l+6]", (4, 6): "bbar[l,l+6]"}
_SPECIAL_WITNESS = {
    (Fraction(0), 1, 4, True): "btilde[0,4]",
    (Fraction(-3), 3, 4, False): "btilde[-3,1]",
    (Fraction(0), 0, 5, False): "bbar[0,5]",
    (Fraction(-4), 0, 5, False): "bbar[-4,1]",
}


def printed_witness_key(inner: Param, outer: Param) -> str | None:
    """Catalog key of the printed witness for the chain inner then outer, if one exists."""
    j = inner.shift.const_value().a
    k = (outer.target - inner.source).const_value().a
    src = inner.source
    if src.is_const() and src.const_value().is_rational():
        key = (src.const_value().a, int(j), int(k), inner.tilde or outer.tilde)
        if key in _SPECIAL_WITNESS:
            return _SPECIAL_WITNESS[key]
    return _GENERIC_WITNESS.get((int(j), int(k)))


def printed_second_order_term(series: DeformationSeries, factor) -> tuple[Blocks, list[str]]:
    """factor * sum t t b over the chains of the space that have a printed witness.

    Returns the term and the chain monomials with no printed witness.
    """
    factor = Scalar.coerce(factor)
    params = series.params.params
    by_target = defaultdict(list)
    for p in params:
        by_target[p.target].append(p)
    out: dict = defaultdict(dict)
    missing = []
    for outer in params:
        for inner in by_target[outer.source]:
            k = int((outer.target - inner.source).const_value().a)
            if k == 0:
                continue
            mono = tuple(sorted((inner, outer), key=Param.sort_key))
            key = printed_witness_key(inner, outer)
            if key is None:
                missing.append(mono_name(mono))
                continue
            e = entry(key)
            b = e.instantiate(None if e.weight is not None else inner.source)
            _add_into(out[(inner.source, k)], mono, b.body.scale(factor))
    return _clean(out), missing


@dataclass
class FactorTrial:
    factor: Scalar
    valid: bool
    failing: list[str]          # chain monomials whose printed witness does not fit
    left_out: list[str]         # chain monomials with no printed witness


def second_order_factor_search(space: SymbolSpace, factors=(Fraction(1, 2), Fraction(-1, 2), 1, -1),
                               exclude: Iterable[Param] = ()) -> list[FactorTrial]:
    """Which global factor makes the printed witnesses solve the order-two equation?

    For each chain monomial with a printed witness b, the factor c fits when
    RHS_2 restricted to that monomial minus d(c b) is a combination of classes.
    """
    series = build_infinitesimal(space, exclude)
    rhs = maurer_cartan_rhs(series, 2)
    trials = []
    for f in factors:
        term, missing = printed_second_order_term(series, f)
        failing = []
        for blk in sorted(term, key=_block_sort_key):
            w, k = blk
            basis = [(key, om) for key, om in declared_classes(w, k)]
            for mono, body in sorted(term[blk].items(), key=lambda mj: mono_key(mj[0])):
                target = rhs.get(blk, {}).get(mono, JetPoly.zero(2))
                rest = Cochain2(w, k, target) - coboundary1(Cochain1(w, k, body))
                dec = decompose(rest, basis, certificate=False)
                if not dec.ok or coboundary1(dec.witness).body:
                    failing.append(f"{block_text(blk)}:{mono_name(mono)}")
        trials.append(FactorTrial(Scalar.coerce(f), not failing, failing, missing))
    return trials


def solves_order(series: DeformationSeries, m: int, candidate: Blocks, ideal: Ideal) -> list[str]:
    """Blocks where d(candidate) differs from RHS_m modulo the ideal (empty list: it solves)."""
    rhs = maurer_cartan_rhs(series, m)
    defect = reduce_blocks(subtract_blocks(coboundary_blocks(candidate), rhs), ideal, 2)
    return [block_text(b) for b in sorted(defect, key=_block_sort_key)]


def differs_by_cocycle(a: Blocks, b: Blocks, ideal: Ideal) -> bool:
    """Do two TPoly-weighted 1-cochains differ by a sum of 1-cocycles modulo the ideal?"""
    diff = reduce_blocks(subtract_blocks(a, b), ideal, 1)
    return not reduce_blocks(coboundary_blocks(diff), ideal, 2)


# ------------------------------------------------------- branches

@dataclass
class Branch:
    equations: list[TPoly]        # linear forms set to zero
    free_parameters: int

    def render(self) -> list[str]:
        return [f"{e.render()} = 0" for e in self.equations]


@dataclass
class BranchEnumeration:
    branches: list[Branch]
    unenumerated: list[TPoly]


def linear_factors(p: TPoly) -> list[TPoly] | None:
    """Split p into linear factors when it is a monomial times a linear form."""
    factors = []
    rest = p
    while rest.degree > 1:
        common = None
        for m in rest.terms:
            common = set(m) if common is None else common & set(m)
        if not common:
            return None
        v = min(common, key=Param.sort_key)
        factors.append(TPoly.var(v))
        new = {}
        for m, c in rest.terms.items():
            lst = list(m)
            lst.remove(v)
            new[tuple(lst)] = c
        rest = TPoly(new)
    if rest.degree == 1 and rest.is_homogeneous():
        factors.append(normalize(rest))
        return factors
    return None


def _linear_rank(forms: Sequence[TPoly]) -> tuple[int, tuple]:
    from .tpoly import _Echelon
    ech = _Echelon()
    for f in forms:
        ech.add(f.terms)
    canon = tuple(sorted(((mono_key(piv), tuple(sorted((mono_key(m), c.to_text())
                                                        for m, c in row.items())))
                          for piv, row in ech.rows.items())))
    return ech.rank, canon


def enumerate_component_solutions(conditions: Sequence[TPoly], params: Sequence[Param]) -> BranchEnumeration:
    """Choose a vanishing linear factor per condition; drop duplicates and non-maximal branches."""
    choices, unenumerated = [], []
    for c in conditions:
        f = linear_factors(c)
        if f is None:
            unenumerated.append(c)
        else:
            uniq = []
            for x in f:
                if x not in uniq:
                    uniq.append(x)
            choices.append(uniq)
    seen = {}
    for pick in product(*choices):
        rank, canon = _linear_rank(pick)
        if canon not in seen:
            seen[canon] = (rank, list(pick))
    spans = list(seen.items())
    maximal = []
    for canon, (rank, eqs) in spans:
        contained = False
        for other, (orank, oeqs) in spans:
            if other == canon or orank >= rank:
                continue
            # other's equations imply a subset of ours: our branch lies inside the other one
            r, _ = _linear_rank(list(eqs) + list(oeqs))
            if r == rank:
                contained = True
                break
        if not contained:
            maximal.append(Branch([normalize(e) for e in eqs], len(params) - rank))
    maximal.sort(key=lambda b: [mono_key(m) for e in b.equations for m in e.terms])
    return BranchEnumeration(maximal, unenumerated)


# --------------------------------------------------- checks at a point

@dataclass
class PointCheck:
    passed: bool
    symbolic_failures: list[dict]
    concrete_failures: list[dict]
    orders_checked: int
    degree_bound: int
    unsatisfied_conditions: list[str]

    def to_json(self) -> dict:
        return {"passed": self.passed, "ordersChecked": self.orders_checked,
                "degreeBound": self.degree_bound,
                "unsatisfiedConditions": self.unsatisfied_conditions,
                "symbolicFailures": self.symbolic_failures,
                "concreteFailures": self.concrete_failures}


def parse_assignment(data: Mapping[str, object]) -> dict[Param, Scalar]:
    out = {}
    for name, value in data.items():
        p = Param.parse(name)
        out[p] = parse_weight(str(value)) if isinstance(value, str) else Scalar.coerce(Fraction(value))
    return out


def order_defect(series: DeformationSeries, m: int) -> Blocks:
    """dL^(m) + 1/2 sum_{i+j=m} [[L^(i), L^(j)]], exactly, without reduction."""
    return subtract_blocks(coboundary_blocks(series.order(m)), maurer_cartan_rhs(series, m))


def _evaluate_blocks(blocks: Blocks, values: Mapping[Param, Scalar], nvf: int) -> dict:
    out = {}
    for b, terms in blocks.items():
        acc = JetPoly.zero(nvf)
        for mono, body in terms.items():
            c = TPoly.monomial(mono).evaluate(values)
            if c:
                acc = acc + body.scale(c)
        if acc:
            out[b] = acc
    return out


def check_deformation_at_point(series: DeformationSeries, assignment: Mapping[Param, object],
                               order: int | None = None, degree_bound: int | None = None,
                               ideal: Ideal | None = None) -> PointCheck:
    """Verify the homomorphism condition order by order at a parameter point.

    Symbolically, each order defect is evaluated at the point; concretely, the
    same defect is recomputed from the operators on monomial inputs.
    """
    from .oracle import deformation_defect_concrete
    values = {p: Scalar.coerce(assignment.get(p, 0)) for p in series.params.params}
    unknown = [p.name for p in assignment if p not in values]
    if unknown:
        raise ValueError(f"parameters not in the space: {', '.join(sorted(unknown))}")
    last = max((m for m, blocks in series.terms.items() if blocks), default=1)
    top = order if order is not None else 2 * last
    unsatisfied = []
    if ideal is not None:
        unsatisfied = [g.render() for g in ideal.generators if g.evaluate(values)]
    # defects on a block of shift k have jet order k + 2
    span = max((b[1] for blocks in series.terms.values() for b in blocks), default=0)
    bound = degree_bound if degree_bound is not None else int(span + 2 + 2)
    sym_fail, conc_fail = [], []
    for m in range(1, top + 1):
        defect = _evaluate_blocks(order_defect(series, m), values, 2)
        for b in sorted(defect, key=_block_sort_key):
            sym_fail.append({"order": m, "block": block_text(b),
                             "defect": defect[b].render_antisymmetric(),
                             "monomials": [mono_name(x) for x in sorted(
                                 order_defect(series, m).get(b, {}), key=mono_key)]})
        for fail in deformation_defect_concrete(series, values, m, bound):
            conc_fail.append(fail)
            break
    return PointCheck(not sym_fail and not conc_fail, sym_fail, conc_fail, top, bound, unsatisfied)


# ------------------------------------------------- shift invariance

@dataclass
class ShiftComparison:
    label: str
    shifted_label: str
    matches: bool
    shifted_conditions: list[str]
    integer_conditions: list[str]
    relabelled: list[str]


def relabel_params(p: TPoly, offset) -> TPoly:
    """Replace each weight w in the parameter names by w - offset evaluated at l = 0."""
    off = Scalar.coerce(offset)

    def fn(param: Param) -> Param:
        src = (param.source - off)
        tgt = (param.target - off)
        if not src.is_const():
            src = Scalar.coerce(src.eval_at(0))
            tgt = Scalar.coerce(tgt.eval_at(0))
        return Param(src, tgt, param.tilde)

    return p.map_params(fn)


def shift_invariance_check(m: int, n: int, samples: Sequence = ()) -> list[ShiftComparison]:
    """Conditions on S^m_(l+n), at formal l and sampled l, against S^m_n after relabelling."""
    from .scalar import LAMBDA
    from .tpoly import same_span
    base = derive_conditions(SymbolSpace(m, Scalar(n)))
    base_conds = [c for c in base.conditions]
    out = []
    for lam in [LAMBDA] + [Scalar.coerce(s) for s in samples]:
        space = SymbolSpace(m, lam + n)
        rep = derive_conditions(space)
        rel = [normalize(relabel_params(c, lam)) for c in rep.conditions]
        ok = same_span(rel, base_conds) and len(rel) == len(base_conds)
        out.append(ShiftComparison(base.space.label, space.label, ok,
                                   [c.render() for c in rep.conditions],
                                   [c.render() for c in base_conds],
                                   [c.render() for c in rel]))
    return out


__all__ = [
    "SymbolSpace", "ParamSet", "DeformationSeries", "build_infinitesimal", "maurer_cartan_rhs",
    "block_obstruction", "block_conditions", "analyze_block", "BlockAnalysis", "solve_order",
    "higher_order_analysis", "derive_conditions", "IntegrabilityReport", "OrderReport",
    "printed_second_order_term", "second_order_factor_search", "solves_order", "differs_by_cocycle",
    "enumerate_component_solutions", "linear_factors", "check_deformation_at_point",
    "parse_assignment", "order_defect", "shift_invariance_check", "relabel_params",
    "DeformationError", "block_text", "render_blocks", "blocks_to_json",
]
