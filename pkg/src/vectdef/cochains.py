"""Cochains of vect(1) with values in D(w, w+k) and their coboundaries."""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .jets import (JetPoly, SlotError, apply_operator, lie_template,
                   substitute_bracket_general)
from .scalar import ONE, Scalar


class WeightMismatch(ValueError):
    pass


def _weight(w) -> Scalar:
    return Scalar.coerce(w)


class _Cochain:
    arity = 0

    def __init__(self, weight, shift: int, body: JetPoly):
        if body.nvf != self.arity:
            raise SlotError(f"{type(self).__name__} needs {self.arity} slots, got {body.nvf}")
        self.weight = _weight(weight)
        self.shift = int(shift)
        self.body = body

    @property
    def target(self) -> Scalar:
        return self.weight + self.shift

    def block(self):
        return (self.weight, self.shift)

    def _same_block(self, other):
        if self.block() != other.block():
            raise WeightMismatch(f"block {self.block()} vs {other.block()}")

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.block() == other.block() and self.body == other.body

    def __hash__(self):
        return hash((type(self).__name__, self.block(), self.body))

    def __bool__(self):
        return bool(self.body)

    def __add__(self, other):
        self._same_block(other)
        return type(self)(self.weight, self.shift, self.body + other.body)

    def __sub__(self, other):
        self._same_block(other)
        return type(self)(self.weight, self.shift, self.body - other.body)

    def __neg__(self):
        return type(self)(self.weight, self.shift, -self.body)

    def scale(self, s):
        return type(self)(self.weight, self.shift, self.body.scale(s))

    __mul__ = scale
    __rmul__ = scale

    def specialize(self, value):
        """Substitute l = value in the weight and in every coefficient."""
        return type(self)(self.weight.eval_at(value), self.shift,
                          self.body.map_coeffs(lambda c: c.specialize(value)))

    def is_homogeneous(self) -> bool:
        return self.body.is_homogeneous() and self.body.orders() <= {self.shift + self.arity}

    def to_json(self) -> dict:
        from .scalar import weight_text
        return {"arity": self.arity, "weight": weight_text(self.weight),
                "shift": self.shift, "terms": self.body.to_json()}

    def render(self) -> str:
        if self.arity == 2:
            return self.body.render_antisymmetric()
        return self.body.render()

    def __repr__(self):
        from .scalar import weight_text
        return f"{type(self).__name__}({weight_text(self.weight)}, {self.shift}, {self.render()!r})"


class Cochain0(_Cochain):
    """A constant operator F_w -> F_{w+k}, stored as a zero-slot jet polynomial in f."""
    arity = 0


class Cochain1(_Cochain):
    arity = 1

    @classmethod
    def from_coeffs(cls, weight, shift: int, coeffs: Sequence) -> Cochain1:
        """sum_j coeffs[j] * X^(k+1-j) f^(j)."""
        k = int(shift)
        if len(coeffs) != k + 2:
            raise ValueError(f"shift {k} needs {k + 2} coefficients, got {len(coeffs)}")
        return cls(weight, k, JetPoly(1, {(k + 1 - j, j): c for j, c in enumerate(coeffs)}))

    @property
    def coeffs(self) -> list[Scalar]:
        k = self.shift
        return [self.body.coeff((k + 1 - j, j)) for j in range(k + 2)]


class Cochain2(_Cochain):
    arity = 2


class Cochain3(_Cochain):
    arity = 3


def zero_cochain(arity: int, weight, shift: int):
    cls = {0: Cochain0, 1: Cochain1, 2: Cochain2, 3: Cochain3}[arity]
    return cls(weight, shift, JetPoly.zero(arity))


# ---------------------------------------------------------------- actions

def lie_derivative(f: JetPoly, weight) -> JetPoly:
    """L^w_X applied to the jet expression ``f``; X becomes slot 0, f's slots shift up."""
    return apply_operator(lie_template(weight), f, [0], list(range(1, f.nvf + 1)), f.nvf + 1)


def _module_action(body: JetPoly, weight: Scalar, shift: int) -> JetPoly:
    """X . A = L^{w+k}_X o A - A o L^w_X for an operator A with ``body.nvf`` slots.

    X is slot 0 of the result, A's slots follow.
    """
    n = body.nvf
    rest = list(range(1, n + 1))
    left = apply_operator(lie_template(weight + shift), body, [0], rest, n + 1)
    right = apply_operator(body, lie_template(weight), rest, [0], n + 1)
    return left - right


def coboundary0(a: Cochain0) -> Cochain1:
    return Cochain1(a.weight, a.shift, _module_action(a.body, a.weight, a.shift))


def coboundary1(b: Cochain1) -> Cochain2:
    """(X, Y) -> X.b(Y) - Y.b(X) - b([X, Y])."""
    act = _module_action(b.body, b.weight, b.shift)
    br = substitute_bracket_general(b.body, 0, (0, 1), (), 2)
    return Cochain2(b.weight, b.shift, act - act.swap() - br)


_CYCLES = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def coboundary2(om: Cochain2) -> Cochain3:
    """(X, Y, Z) -> X.om(Y, Z) - om([X, Y], Z) + cyclic permutations."""
    act = _module_action(om.body, om.weight, om.shift)
    br = substitute_bracket_general(om.body, 0, (0, 1), (2,), 3)
    one = act - br
    total = JetPoly.zero(3)
    for cyc in _CYCLES:
        # slot i of the (X,Y,Z) expression is taken by the cyc[i]-th variable
        total = total + one.permute(cyc)
    return Cochain3(om.weight, om.shift, total)


def compose(outer: Cochain1, inner: Cochain1) -> JetPoly:
    """(X, Y) -> outer(X)(inner(Y) f)."""
    return apply_operator(outer.body, inner.body, [0], [1], 2)


def cup(c1: Cochain1, c2: Cochain1) -> Cochain2:
    """[[c1, c2]] on the graded pieces where the two operators compose.

    A term c1(X) o c2(Y) exists when c1 starts where c2 ends and vice versa;
    both orders occur only for two shift-zero cochains of the same weight.
    """
    if not c1 or not c2:
        src = c2.weight if c1.weight == c2.target else c1.weight
        return zero_cochain(2, src, c1.shift + c2.shift)
    body = JetPoly.zero(2)
    src = None
    if c1.weight == c2.target:
        body = body + compose(c1, c2).antisymmetrize()
        src = c2.weight
    if c2.weight == c1.target:
        body = body + compose(c2, c1).antisymmetrize()
        src = c1.weight if src is None else src
    if src is None:
        raise WeightMismatch(
            f"cochains on blocks {c1.block()} and {c2.block()} do not compose")
    return Cochain2(src, c1.shift + c2.shift, body)


# ------------------------------------------------------ ansatz bases

def ansatz_basis(weight, shift: int) -> list[Cochain1]:
    """X^(k+1-j) f^(j), j = 0..k+1."""
    k = int(shift)
    return [Cochain1(weight, k, JetPoly(1, {(k + 1 - j, j): ONE})) for j in range(k + 2)]


@lru_cache(maxsize=512)
def ansatz_coboundaries(weight: Scalar, shift: int) -> tuple[Cochain2, ...]:
    return tuple(coboundary1(b) for b in ansatz_basis(weight, shift))


def trivial_cocycle(weight, shift: int) -> Cochain1:
    """The 1-coboundary of the constant operator f -> f^(k)."""
    a = Cochain0(weight, shift, JetPoly(0, {(shift,): ONE}))
    return coboundary0(a)


def antisymmetric_monomials(order: int) -> list[tuple[int, int, int]]:
    """(a, b, e) with a > b and a + b + e = order; coordinates of an antisymmetric 2-cochain."""
    out = []
    for a in range(order, -1, -1):
        for b in range(min(a - 1, order - a), -1, -1):
            out.append((a, b, order - a - b))
    return out


__all__ = [
    "Cochain0", "Cochain1", "Cochain2", "Cochain3", "WeightMismatch", "zero_cochain",
    "lie_derivative", "coboundary0", "coboundary1", "coboundary2", "compose", "cup",
    "ansatz_basis", "ansatz_coboundaries", "trivial_cocycle", "antisymmetric_monomials",
]
