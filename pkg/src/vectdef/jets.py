"""Multilinear jet polynomials in vector-field slots X, Y, Z and one density f.

A monomial is a tuple ``(a, b, ..., e)``: the derivative orders of the vector
field slots followed by the derivative order of ``f``.  ``(3, 2, 1)`` stands for
X'''Y''f'.  Every monomial in a :class:`JetPoly` has the same number of slots.
"""

from __future__ import annotations

from collections import defaultdict
from math import comb
from typing import Iterable, Mapping, Sequence

from .scalar import ONE, ZERO, Scalar

SLOT_NAMES = ("X", "Y", "Z", "W")


class SlotError(ValueError):
    pass


class JetPoly:
    __slots__ = ("nvf", "terms")

    def __init__(self, nvf: int, terms: Mapping[tuple, object] | None = None):
        self.nvf = nvf
        clean = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != nvf + 1:
                    raise SlotError(f"monomial {mono} does not have {nvf} vector-field slots")
                c = c if isinstance(c, Scalar) else Scalar.coerce(c)
                if c:
                    clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def _from_acc(cls, nvf: int, acc: dict) -> JetPoly:
        p = object.__new__(cls)
        p.nvf = nvf
        p.terms = {m: c for m, c in acc.items() if c}
        return p

    @classmethod
    def zero(cls, nvf: int) -> JetPoly:
        return cls._from_acc(nvf, {})

    @classmethod
    def monomial(cls, mono: Sequence[int], coeff=ONE) -> JetPoly:
        return cls(len(mono) - 1, {tuple(mono): coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, JetPoly):
            return NotImplemented
        return self.nvf == other.nvf and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvf, frozenset(self.terms.items())))

    def _check(self, other: JetPoly):
        if self.nvf != other.nvf:
            raise SlotError(f"slot arity mismatch: {self.nvf} vs {other.nvf}")

    def __add__(self, other: JetPoly) -> JetPoly:
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc[m] + c if m in acc else c
        return JetPoly._from_acc(self.nvf, acc)

    def __neg__(self):
        return JetPoly._from_acc(self.nvf, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: JetPoly) -> JetPoly:
        return self + (-other)

    def scale(self, s) -> JetPoly:
        s = Scalar.coerce(s)
        if not s:
            return JetPoly.zero(self.nvf)
        return JetPoly._from_acc(self.nvf, {m: c * s for m, c in self.terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def coeff(self, mono: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(mono), ZERO)

    def map_coeffs(self, fn) -> JetPoly:
        return JetPoly(self.nvf, {m: fn(c) for m, c in self.terms.items()})

    # ------------------------------------------------------------------ shape

    def orders(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.orders()) <= 1

    def total_order(self) -> int | None:
        """The common total order, or None for the zero polynomial."""
        orders = self.orders()
        if len(orders) > 1:
            raise ValueError(f"inhomogeneous jet polynomial with orders {sorted(orders)}")
        return next(iter(orders)) if orders else None

    def max_order(self) -> int:
        return max((max(m) for m in self.terms), default=0)

    # ------------------------------------------------------------ operations

    def derivative(self) -> JetPoly:
        """Total derivative d/dx acting on every slot by the Leibniz rule."""
        acc: dict = defaultdict(lambda: ZERO)
        for m, c in self.terms.items():
            for i in range(len(m)):
                nm = m[:i] + (m[i] + 1,) + m[i + 1:]
                acc[nm] = acc[nm] + c
        return JetPoly._from_acc(self.nvf, acc)

    def derivatives(self, n: int) -> list[JetPoly]:
        out = [self]
        for _ in range(n):
            out.append(out[-1].derivative())
        return out

    def permute(self, perm: Sequence[int]) -> JetPoly:
        """Move slot ``i`` to position ``perm[i]``."""
        if sorted(perm) != list(range(self.nvf)):
            raise SlotError(f"{perm} is not a permutation of {self.nvf} slots")
        acc = {}
        for m, c in self.terms.items():
            nm = [0] * (self.nvf + 1)
            for i, p in enumerate(perm):
                nm[p] = m[i]
            nm[-1] = m[-1]
            acc[tuple(nm)] = c
        return JetPoly._from_acc(self.nvf, acc)

    def swap(self, i: int = 0, j: int = 1) -> JetPoly:
        if not (0 <= i < self.nvf and 0 <= j < self.nvf):
            raise SlotError(f"slots {i}, {j} not both present in a {self.nvf}-slot polynomial")
        perm = list(range(self.nvf))
        perm[i], perm[j] = perm[j], perm[i]
        return self.permute(perm)

    def antisymmetrize(self, i: int = 0, j: int = 1) -> JetPoly:
        """p - swap(p); not divided by two."""
        return self - self.swap(i, j)

    def is_antisymmetric(self) -> bool:
        return all(self.swap(i, j) == -self
                   for i in range(self.nvf) for j in range(i + 1, self.nvf))

    # ------------------------------------------------------------- rendering

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: tuple(-x for x in mc[0]))

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            mono = render_monomial(m)
            if c == ONE:
                body, neg = mono, False
            elif c == -ONE:
                body, neg = mono, True
            else:
                txt = c.pretty()
                neg = txt.startswith("-") and c.is_const()
                if neg:
                    txt = (-c).pretty()
                if not c.is_const() or " " in txt:
                    txt = f"({txt})"
                body = f"{txt}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    def render_antisymmetric(self) -> str:
        """Half the terms (first slot order above second) followed by ``- (X<->Y)``."""
        if self.nvf != 2:
            raise SlotError("antisymmetric rendering needs exactly two slots")
        half = JetPoly._from_acc(2, {m: c for m, c in self.terms.items() if m[0] > m[1]})
        if half.antisymmetrize() != self:
            return self.render()
        return f"{half.render()} - (X<->Y)" if half else "0"

    def __repr__(self):
        return f"JetPoly({self.render()!r})"

    __str__ = render

    def to_json(self) -> list:
        return [[list(m), c.to_text()] for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, nvf: int, data: Iterable) -> JetPoly:
        return cls(nvf, {tuple(m): Scalar.parse(c) for m, c in data})


def _prime(n: int) -> str:
    if n == 0:
        return ""
    if n <= 2:
        return "'" * n
    return f"^({n})"


def render_monomial(m: Sequence[int]) -> str:
    parts = [SLOT_NAMES[i] + _prime(a) for i, a in enumerate(m[:-1])]
    return "".join(parts) + "f" + _prime(m[-1])


# --------------------------------------------------------------- composition

def apply_operator(op: JetPoly, arg: JetPoly, op_slots: Sequence[int],
                   arg_slots: Sequence[int], total: int) -> JetPoly:
    """Evaluate the operator ``op`` on the jet expression ``arg`` in place of f.

    ``op``'s vector-field slot ``i`` lands at position ``op_slots[i]`` of the
    result and ``arg``'s slot ``j`` at ``arg_slots[j]``.  The two position sets
    must be disjoint and together cover ``range(total)``.
    """
    if len(op_slots) != op.nvf or len(arg_slots) != arg.nvf:
        raise SlotError("slot map does not match operand arity")
    if sorted(list(op_slots) + list(arg_slots)) != list(range(total)):
        raise SlotError("slot maps must partition the result slots")
    if not op.terms or not arg.terms:
        return JetPoly.zero(total)
    top = max(m[-1] for m in op.terms)
    ders = arg.derivatives(top)
    acc: dict = defaultdict(lambda: ZERO)
    base = [0] * (total + 1)
    for m, c in op.terms.items():
        for am, ac in ders[m[-1]].terms.items():
            nm = list(base)
            for i, s in enumerate(op_slots):
                nm[s] = m[i]
            for j, s in enumerate(arg_slots):
                nm[s] = am[j]
            nm[-1] = am[-1]
            key = tuple(nm)
            acc[key] = acc[key] + c * ac
    return JetPoly._from_acc(total, acc)


def substitute_bracket_general(p: JetPoly, slot: int, pair: tuple[int, int],
                               others: Sequence[int], total: int) -> JetPoly:
    """Replace the vector field in ``slot`` by [X, Y] = XY' - X'Y.

    X and Y go to result positions ``pair``; the remaining slots of ``p`` (in
    order) go to ``others``.
    """
    if not 0 <= slot < p.nvf:
        raise SlotError(f"slot {slot} absent")
    rest = [i for i in range(p.nvf) if i != slot]
    if len(rest) != len(others):
        raise SlotError("slot map does not match arity")
    xi, yi = pair
    acc: dict = defaultdict(lambda: ZERO)
    for m, c in p.terms.items():
        n = m[slot]
        nm = [0] * (total + 1)
        nm[-1] = m[-1]
        for src, dst in zip(rest, others):
            nm[dst] = m[src]
        for j in range(n + 1):
            w = comb(n, j)
            nm[xi], nm[yi] = j, n - j + 1
            k1 = tuple(nm)
            acc[k1] = acc[k1] + c * w
            nm[xi], nm[yi] = j + 1, n - j
            k2 = tuple(nm)
            acc[k2] = acc[k2] - c * w
    return JetPoly._from_acc(total, acc)


def substitute_bracket(template: JetPoly) -> JetPoly:
    """One-slot template b(W)f  ->  two-slot b([X, Y])f."""
    if template.nvf != 1:
        raise SlotError(f"bracket substitution needs a one-slot template, got {template.nvf} slots")
    return substitute_bracket_general(template, 0, (0, 1), (), 2)


def lie_template(weight) -> JetPoly:
    """The one-slot operator X f' + weight * X' f."""
    return JetPoly(1, {(0, 1): ONE, (1, 0): Scalar.coerce(weight)})
