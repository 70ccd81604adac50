"""Concrete evaluation on polynomial vector fields and densities.

Everything here works with explicit polynomials in x with coefficients in
Q(sqrt d), independently of the jet-level machinery: a cochain is applied by
differentiating actual polynomials, and compositions, brackets and module
actions are computed on the results.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import perm
from typing import Callable, Iterable, Mapping, Sequence

from .jets import JetPoly
from .scalar import QuadExt, Scalar

SAMPLE_LAMBDAS = (Fraction(7, 3), Fraction(-11, 5), Fraction(13, 7))
MAX_DEGREE = 14


class OracleError(ValueError):
    pass


def _num(c):
    """Rational values as Fractions (fast path), surds as QuadExt."""
    if isinstance(c, QuadExt):
        return Fraction(c.a) if c.is_rational() else c
    return Fraction(c)


class CPoly:
    """Sparse polynomial in x: ``terms`` maps exponents to nonzero coefficients."""
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else enumerate(terms)
        self.terms = {i: v for i, c in items if (v := _num(c))}

    @classmethod
    def _raw(cls, terms: dict) -> CPoly:
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def monomial(cls, n: int, c=1) -> CPoly:
        return cls({n: c})

    @property
    def coeffs(self) -> tuple:
        """Dense coefficient list, lowest degree first."""
        if not self.terms:
            return ()
        return tuple(self.terms.get(i, Fraction(0)) for i in range(max(self.terms) + 1))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, CPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: CPoly) -> CPoly:
        out = dict(self.terms)
        for i, c in other.terms.items():
            v = out.get(i, 0) + c
            if v:
                out[i] = v
            else:
                out.pop(i, None)
        return CPoly._raw(out)

    def __neg__(self):
        return CPoly._raw({i: -c for i, c in self.terms.items()})

    def __sub__(self, other: CPoly) -> CPoly:
        return self + (-other)

    def __mul__(self, other: CPoly) -> CPoly:
        out: dict = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return CPoly._raw({i: c for i, c in out.items() if c})

    def scale(self, s) -> CPoly:
        s = _num(s)
        return CPoly._raw({i: c * s for i, c in self.terms.items()}) if s else CPoly()

    def derivative(self, n: int = 1) -> CPoly:
        out = {}
        for i, c in self.terms.items():
            if i >= n:
                out[i - n] = c * perm(i, n)
        return CPoly._raw(out)

    def to_text(self) -> str:
        if not self:
            return "0"
        return " + ".join(f"({QuadExt.coerce(c).to_text()})*x^{i}" for i, c in sorted(self.terms.items()))

    def __repr__(self):
        return f"CPoly({self.to_text()})"


def _const(c, lam=None) -> QuadExt:
    s = c if isinstance(c, Scalar) else Scalar.coerce(c)
    if s.is_const():
        return _num(s.const_value())
    if lam is None:
        raise OracleError("coefficient depends on l; supply a value for l")
    return _num(s.eval_at(lam))


def act_density(x: CPoly, f: CPoly, weight) -> CPoly:
    """L^w_X f = X f' + w X' f."""
    return x * f.derivative() + (x.derivative() * f).scale(_const(weight))


def bracket(x: CPoly, y: CPoly) -> CPoly:
    return x * y.derivative() - x.derivative() * y


@lru_cache(maxsize=4096)
def _numeric_terms(body: JetPoly, lam) -> tuple:
    return tuple((mono, _const(c, lam)) for mono, c in body.terms.items())


def eval_jet(body: JetPoly, fields: Sequence[CPoly], f: CPoly, lam=None) -> CPoly:
    """Substitute concrete vector fields and density into a jet polynomial."""
    if len(fields) != body.nvf:
        raise OracleError(f"jet polynomial needs {body.nvf} fields, got {len(fields)}")
    out = CPoly()
    for mono, c in _numeric_terms(body, lam):
        term = f.derivative(mono[-1])
        for fld, a in zip(fields, mono[:-1]):
            if not term:
                break
            term = term * fld.derivative(a)
        if term:
            out = out + term.scale(c)
    return out


def apply_operator(body: JetPoly, fields: Sequence[CPoly], f: CPoly, lam=None) -> CPoly:
    return eval_jet(body, fields, f, lam)


def _weight(w, lam) -> QuadExt:
    return _const(w, lam)


def module_action_1(body: JetPoly, source, shift: int, x: CPoly, y: CPoly, f: CPoly, lam=None) -> CPoly:
    """(X . A)(Y) f = L^{w+k}_X (A(Y) f) - A(Y)(L^w_X f)."""
    w = _weight(source, lam)
    return act_density(x, eval_jet(body, [y], f, lam), w + shift) - \
        eval_jet(body, [y], act_density(x, f, w), lam)


def coboundary1_concrete(body: JetPoly, source, shift: int, x: CPoly, y: CPoly, f: CPoly,
                         lam=None) -> CPoly:
    """X.b(Y) - Y.b(X) - b([X, Y]) applied to f."""
    return module_action_1(body, source, shift, x, y, f, lam) - \
        module_action_1(body, source, shift, y, x, f, lam) - \
        eval_jet(body, [bracket(x, y)], f, lam)


def coboundary2_concrete(body: JetPoly, source, shift: int, x: CPoly, y: CPoly, z: CPoly,
                         f: CPoly, lam=None) -> CPoly:
    """Sum over cyclic (X, Y, Z) of X.om(Y, Z) - om([X, Y], Z), applied to f."""
    w = _weight(source, lam)
    total = CPoly()
    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        act = act_density(a, eval_jet(body, [b, c], f, lam), w + shift) - \
            eval_jet(body, [b, c], act_density(a, f, w), lam)
        total = total + act - eval_jet(body, [bracket(a, b), c], f, lam)
    return total


def cup_concrete(outer: JetPoly, inner: JetPoly, x: CPoly, y: CPoly, f: CPoly, lam=None) -> CPoly:
    """outer(X)(inner(Y) f) - outer(Y)(inner(X) f)."""
    return eval_jet(outer, [x], eval_jet(inner, [y], f, lam), lam) - \
        eval_jet(outer, [y], eval_jet(inner, [x], f, lam), lam)


# ------------------------------------------------------------ cross checks

@dataclass
class CrossCheckResult:
    passed: bool
    checked: int
    failing: tuple | None = None        # (l, degrees of the monomial inputs)
    lhs: str | None = None
    rhs: str | None = None

    def to_json(self) -> dict:
        out = {"passed": self.passed, "checked": self.checked}
        if self.failing is not None:
            lam, degs = self.failing
            out["failing"] = {"l": None if lam is None else str(lam), "degrees": list(degs)}
            out["lhs"], out["rhs"] = self.lhs, self.rhs
        return out


def _tuples(arity: int, bound: int):
    """Degree tuples ordered by total degree, then lexicographically, so the first failure is minimal."""
    return sorted(product(range(bound + 1), repeat=arity), key=lambda t: (sum(t), t))


def cross_check(lhs: Callable, rhs: Callable, arity: int, degree_bound: int,
                lambdas: Sequence = SAMPLE_LAMBDAS, min_total: int = 0) -> CrossCheckResult:
    """Compare two concrete evaluators on monomial inputs x^a, ..., x^e.

    ``lhs`` and ``rhs`` take (l, fields, f) and return a CPoly; ``arity`` counts
    the vector-field inputs.  Pass ``lambdas=(None,)`` when nothing depends on l.
    Tuples of total degree below ``min_total`` are skipped: an operator whose
    terms all carry that many derivatives vanishes on them.
    """
    if degree_bound > MAX_DEGREE:
        raise OracleError(f"degree bound {degree_bound} exceeds {MAX_DEGREE}")
    checked = 0
    for lam in lambdas:
        lq = None if lam is None else _num(QuadExt.coerce(lam))
        for degs in _tuples(arity + 1, degree_bound):
            if sum(degs) < min_total:
                continue
            fields = [CPoly.monomial(d) for d in degs[:-1]]
            f = CPoly.monomial(degs[-1])
            a, b = lhs(lq, fields, f), rhs(lq, fields, f)
            checked += 1
            if a != b:
                return CrossCheckResult(False, checked, (lam, degs), a.to_text(), b.to_text())
    return CrossCheckResult(True, checked)


def check_cocycle2(body: JetPoly, source, shift: int, degree_bound: int,
                   lambdas: Sequence = SAMPLE_LAMBDAS) -> CrossCheckResult:
    """Concrete check that a 2-cochain is closed."""
    return cross_check(lambda lam, fl, f: coboundary2_concrete(body, source, shift, *fl, f, lam),
                       lambda lam, fl, f: CPoly(), 3, degree_bound, lambdas, shift + 3)


def check_cocycle1(body: JetPoly, source, shift: int, degree_bound: int,
                   lambdas: Sequence = SAMPLE_LAMBDAS) -> CrossCheckResult:
    return cross_check(lambda lam, fl, f: coboundary1_concrete(body, source, shift, *fl, f, lam),
                       lambda lam, fl, f: CPoly(), 2, degree_bound, lambdas, shift + 2)


def check_equal2(a: JetPoly, b: JetPoly, degree_bound: int,
                 lambdas: Sequence = SAMPLE_LAMBDAS) -> CrossCheckResult:
    return cross_check(lambda lam, fl, f: eval_jet(a, fl, f, lam),
                       lambda lam, fl, f: eval_jet(b, fl, f, lam), 2, degree_bound, lambdas)


# --------------------------------------------------------- deformations

def _operators(blocks: Mapping, values: Mapping) -> dict:
    """Evaluate TPoly-weighted blocks at a parameter point: block -> JetPoly."""
    from .tpoly import TPoly
    out = {}
    for blk, terms in blocks.items():
        acc = None
        for mono, body in terms.items():
            c = TPoly.monomial(mono).evaluate(values)
            if c:
                acc = body.scale(c) if acc is None else acc + body.scale(c)
        if acc:
            out[blk] = acc
    return out


def deformation_defect_concrete(series, values: Mapping, m: int, degree_bound: int) -> list[dict]:
    """Order-m part of [D_X, D_Y] - D_[X,Y] for D = L + sum t-weighted L^(i), on monomials.

    The order-m part is dL^(m) + sum_{i+j=m} (L^(i)(X) L^(j)(Y) - L^(i)(Y) L^(j)(X)),
    computed from the operators' action on explicit polynomials.  Returns
    failures ordered by input degree (at most one per block).
    """
    from .deformation import block_text
    ops = {i: _operators(series.order(i), values) for i in range(1, m + 1)}
    sources = set()
    for blocks in ops.values():
        sources.update(b[0] for b in blocks)
    for w in sources:
        if not w.is_const():
            raise OracleError("concrete checks need numeric weights")
    failures = []
    for src in sorted(sources, key=lambda s: s.sort_key()):
        targets: dict = {}
        for blk, body in ops[m].items():
            if blk[0] == src:
                targets.setdefault(blk[1], []).append(("d", body, None))
        for i in range(1, m):
            j = m - i
            for (sq, kq), qb in ops[j].items():
                if sq != src:
                    continue
                for (sp, kp), pb in ops[i].items():
                    if sp == sq + kq:
                        targets.setdefault(kq + kp, []).append(("c", pb, qb))
        for k in sorted(targets):
            parts = targets[k]
            for degs in _tuples(3, degree_bound):
                if sum(degs) < k + 2:
                    continue        # an operator of jet order k + 2 kills these inputs
                x, y, f = (CPoly.monomial(d) for d in degs)
                total = CPoly()
                for kind, a, b in parts:
                    if kind == "d":
                        total = total + coboundary1_concrete(a, src, k, x, y, f)
                    else:
                        total = total + cup_concrete(a, b, x, y, f)
                if total:
                    failures.append({"order": m, "block": block_text((src, k)),
                                     "degrees": list(degs), "value": total.to_text()})
                    break
    failures.sort(key=lambda d: (sum(d["degrees"]), d["degrees"]))
    return failures


__all__ = [
    "CPoly", "act_density", "bracket", "eval_jet", "apply_operator", "coboundary1_concrete",
    "coboundary2_concrete", "cup_concrete", "cross_check", "CrossCheckResult", "check_cocycle1",
    "check_cocycle2", "check_equal2", "deformation_defect_concrete", "SAMPLE_LAMBDAS",
    "MAX_DEGREE", "OracleError",
]
