"""Polynomials in the deformation parameters and ideals they generate.

A parameter ``t[l0,l1]`` is attached to the cocycle on D(l0, l1); the extra
shift-one parameter at weight zero is ``ttilde[0,1]``.  Coefficients are
:class:`Scalar` values, so generic-weight conditions such as
``(2l+13) t[l,l+3] t[l+3,l+7]`` are represented directly.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict
from fractions import Fraction
from functools import reduce
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, NamedTuple

from .scalar import (ONE, ZERO, LambdaPoly, QuadExt, Scalar, lcm_poly, parse_weight,
                     poly_gcd, weight_text)


class Param(NamedTuple):
    source: Scalar
    target: Scalar
    tilde: bool = False

    @property
    def shift(self) -> Scalar:
        return self.target - self.source

    @property
    def name(self) -> str:
        head = "ttilde" if self.tilde else "t"
        return f"{head}[{weight_text(self.source)},{weight_text(self.target)}]"

    def sort_key(self):
        return (self.source.sort_key(), self.target.sort_key(), self.tilde)

    def shifted(self, s) -> Param:
        return Param(self.source + s, self.target + s, self.tilde)

    def __repr__(self):
        return self.name

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    @classmethod
    def parse(cls, text: str) -> Param:
        m = re.fullmatch(r"\s*(t|ttilde)\[([^,\]]+),([^\]]+)\]\s*", text)
        if not m:
            raise ValueError(f"malformed parameter name {text!r}")
        return cls(parse_weight(m.group(2)), parse_weight(m.group(3)), m.group(1) == "ttilde")


Monomial = tuple  # sorted tuple of Params, repeated for powers


def _mono(params: Iterable[Param]) -> Monomial:
    return tuple(sorted(params, key=Param.sort_key))


def mono_key(m: Monomial):
    return tuple(p.sort_key() for p in m)


def mono_name(m: Monomial) -> str:
    return "*".join(p.name for p in m) if m else "1"


class TPoly:
    """Sparse polynomial {monomial: Scalar} in the parameters."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Scalar.coerce(c)
            if c:
                m = _mono(m)
                clean[m] = clean[m] + c if m in clean else c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def _raw(cls, terms: dict) -> TPoly:
        p = object.__new__(cls)
        p.terms = {m: c for m, c in terms.items() if c}
        return p

    @classmethod
    def var(cls, p: Param) -> TPoly:
        return cls._raw({(p,): ONE})

    @classmethod
    def const(cls, c) -> TPoly:
        return cls({(): c})

    @classmethod
    def monomial(cls, m: Iterable[Param], c=ONE) -> TPoly:
        return cls({_mono(m): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, TPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: TPoly) -> TPoly:
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc[m] + c if m in acc else c
        return TPoly._raw(acc)

    def __neg__(self):
        return TPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: TPoly) -> TPoly:
        return self + (-other)

    def __mul__(self, other) -> TPoly:
        if not isinstance(other, TPoly):
            return self.scale(other)
        acc: dict = defaultdict(lambda: ZERO)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono(m1 + m2)
                acc[m] = acc[m] + c1 * c2
        return TPoly._raw(acc)

    __rmul__ = __mul__

    def scale(self, s) -> TPoly:
        s = Scalar.coerce(s)
        return TPoly._raw({m: c * s for m, c in self.terms.items()}) if s else TPoly()

    def degrees(self) -> set[int]:
        return {len(m) for m in self.terms}

    @property
    def degree(self) -> int:
        return max(self.degrees(), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_parts(self) -> dict[int, TPoly]:
        parts: dict = defaultdict(dict)
        for m, c in self.terms.items():
            parts[len(m)][m] = c
        return {d: TPoly._raw(t) for d, t in parts.items()}

    def variables(self) -> set[Param]:
        return {p for m in self.terms for p in m}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: mono_key(mc[0]))

    def leading(self):
        return self.sorted_terms()[0] if self.terms else None

    def substitute(self, values: Mapping[Param, object]) -> TPoly:
        """Replace some parameters by scalars; the others stay symbolic."""
        out = TPoly()
        for m, c in self.terms.items():
            coeff = c
            rest = []
            for p in m:
                if p in values:
                    coeff = coeff * Scalar.coerce(values[p])
                else:
                    rest.append(p)
            out = out + TPoly({tuple(rest): coeff})
        return out

    def evaluate(self, values: Mapping[Param, object]) -> Scalar:
        res = self.substitute(values)
        if res.variables():
            missing = sorted(res.variables(), key=Param.sort_key)
            raise KeyError(f"no value for {', '.join(p.name for p in missing)}")
        return res.terms.get((), ZERO)

    def shift_weights(self, s) -> TPoly:
        """Relabel every parameter t[a,b] as t[a+s,b+s] and shift l-dependence of coefficients."""
        return TPoly({tuple(p.shifted(s) for p in m): c for m, c in self.terms.items()})

    def map_params(self, fn) -> TPoly:
        return TPoly({tuple(fn(p) for p in m): c for m, c in self.terms.items()})

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            name = mono_name(m)
            if c == ONE:
                body, neg = name, False
            elif c == -ONE:
                body, neg = name, True
            else:
                txt = c.pretty()
                neg = c.is_const() and txt.startswith("-") and " " not in txt[1:]
                if neg:
                    txt = (-c).pretty()
                if " " in txt or not c.is_const():
                    txt = f"({txt})"
                body = txt if not m else f"{txt}*{name}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    __str__ = render

    def __repr__(self):
        return f"TPoly({self.render()!r})"

    def to_json(self) -> list:
        return [[[p.name for p in m], c.to_text()] for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data) -> TPoly:
        return cls({tuple(Param.parse(n) for n in names): Scalar.parse(c) for names, c in data})


def tvar(text: str) -> TPoly:
    return TPoly.var(Param.parse(text))


# ------------------------------------------------------------ normalization

def _rational_content(polys: list[LambdaPoly]) -> Fraction | None:
    """gcd of all rational coefficients, or None if a surd occurs."""
    nums, dens = [], []
    for p in polys:
        for c in p.coeffs:
            if not c:
                continue
            if not c.is_rational():
                return None
            nums.append(c.a.numerator)
            dens.append(c.a.denominator)
    if not nums:
        return None
    return Fraction(reduce(math.gcd, nums), reduce(math.lcm, dens))


def normalize(p: TPoly) -> TPoly:
    """Canonical representative of the line through ``p``.

    Denominators in l are cleared and the l-content removed; rational
    coefficients are made coprime integers, otherwise the leading coefficient
    is made 1; the leading term has a positive leading coefficient.
    """
    if not p:
        return p
    terms = p.sorted_terms()
    den = lcm_poly([c.den for _, c in terms])
    nums = [(c * Scalar(den)).num for _, c in terms]
    g = reduce(poly_gcd, nums)
    nums = [n.exact_div(g) for n in nums]
    content = _rational_content(nums)
    if content is not None:
        factor = QuadExt(1 / content)
    else:
        factor = nums[0].lc().inv()
    lead = nums[0].lc() * factor
    if lead.to_mpf() < 0:
        factor = -factor
    out = {}
    for (m, _), n in zip(terms, nums):
        out[m] = Scalar(n * LambdaPoly.const(factor))
    return TPoly._raw(out)


def proportional(p: TPoly, q: TPoly) -> Scalar | None:
    """The scalar s with p = s q, or None."""
    if not p or not q:
        return ONE if not p and not q else None
    if set(p.terms) != set(q.terms):
        return None
    m0 = next(iter(p.terms))
    s = p.terms[m0] / q.terms[m0]
    return s if all(p.terms[m] == s * q.terms[m] for m in p.terms) else None


# ------------------------------------------------------------------- ideals

def monomials_of_degree(variables: Iterable[Param], degree: int) -> list[Monomial]:
    vs = sorted(set(variables), key=Param.sort_key)
    return [tuple(c) for c in combinations_with_replacement(vs, degree)]


class _Echelon:
    """Fully reduced row echelon form of sparse Scalar rows over monomial columns."""

    def __init__(self):
        self.rows: dict[Monomial, dict] = {}   # pivot monomial -> row (pivot coeff 1)

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        for piv in sorted([m for m in row if m in self.rows], key=mono_key):
            c = row.get(piv)
            if not c:
                continue
            for m, v in self.rows[piv].items():
                nv = row.get(m, ZERO) - c * v
                if nv:
                    row[m] = nv
                else:
                    row.pop(m, None)
        return row

    def add(self, row: dict) -> bool:
        row = self.reduce(row)
        row = {m: c for m, c in row.items() if c}
        if not row:
            return False
        # reduction against existing pivots can expose earlier pivots again; repeat until stable
        while any(m in self.rows for m in row):
            row = {m: c for m, c in self.reduce(row).items() if c}
            if not row:
                return False
        piv = min(row, key=mono_key)
        inv = row[piv].inv()
        row = {m: c * inv for m, c in row.items()}
        for other in self.rows.values():
            c = other.get(piv)
            if c:
                for m, v in row.items():
                    nv = other.get(m, ZERO) - c * v
                    if nv:
                        other[m] = nv
                    else:
                        other.pop(m, None)
        self.rows[piv] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


class Ideal:
    """Ideal generated by homogeneous polynomials, reduced degree by degree.

    Normal forms use the linear span of monomial multiples of the generators
    in each degree, so no Groebner basis is needed for the small ideals that
    occur here.
    """

    def __init__(self, generators: Iterable[TPoly] = ()):
        self.generators: list[TPoly] = []
        self._cache: dict = {}
        for g in generators:
            self.add(g)

    def add(self, g: TPoly) -> bool:
        """Add a generator unless it already lies in the ideal; returns True if added."""
        added = False
        for part in g.homogeneous_parts().values():
            if part and not self.contains(part):
                self.generators.append(normalize(part))
                self._cache.clear()
                added = True
        return added

    def copy(self) -> Ideal:
        out = Ideal()
        out.generators = list(self.generators)
        return out

    def _echelon(self, degree: int, variables: frozenset) -> _Echelon:
        key = (degree, variables)
        if key not in self._cache:
            ech = _Echelon()
            for g in self.generators:
                d = g.degree
                if d > degree:
                    continue
                for m in monomials_of_degree(variables, degree - d):
                    ech.add((TPoly.monomial(m) * g).terms)
            self._cache[key] = ech
        return self._cache[key]

    def _variables(self, p: TPoly) -> frozenset:
        vs = set(p.variables())
        for g in self.generators:
            vs |= g.variables()
        return frozenset(vs)

    def normal_form(self, p: TPoly) -> TPoly:
        if not p or not self.generators:
            return p
        out = TPoly()
        for d, part in p.homogeneous_parts().items():
            ech = self._echelon(d, self._variables(part))
            out = out + TPoly._raw(ech.reduce(part.terms))
        return out

    def contains(self, p: TPoly) -> bool:
        return not self.normal_form(p)

    def __contains__(self, p: TPoly) -> bool:
        return self.contains(p)

    def equals_in_degree(self, other: Ideal, degree: int) -> bool:
        return all(other.contains(g) for g in self.generators if g.degree == degree) and \
            all(self.contains(g) for g in other.generators if g.degree == degree)

    def same_generated(self, other: Ideal) -> bool:
        return all(other.contains(g) for g in self.generators) and \
            all(self.contains(g) for g in other.generators)


def same_span(a: Iterable[TPoly], b: Iterable[TPoly]) -> bool:
    """Do two lists of polynomials span the same vector space?"""
    ea, eb, eab = _Echelon(), _Echelon(), _Echelon()
    for p in a:
        ea.add(p.terms)
        eab.add(p.terms)
    for p in b:
        eb.add(p.terms)
        eab.add(p.terms)
    return ea.rank == eb.rank == eab.rank


__all__ = ["Param", "TPoly", "tvar", "normalize", "proportional", "Ideal", "same_span",
           "monomials_of_degree", "mono_key", "mono_name"]
