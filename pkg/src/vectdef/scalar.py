"""Exact coefficient tower: Q, Q(sqrt d), Q(sqrt d)[l] and Q(sqrt d)(l).

``l`` is the single formal weight variable.  Every value is immutable and
kept in a canonical form, so ``==`` and ``hash`` are structural.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

import mpmath

SUPPORTED_DISCRIMINANTS = (19, 39)


class DivisionByZero(ZeroDivisionError):
    """Inverse of an exact zero was requested."""


class DiscriminantMismatch(ValueError):
    """Two surds with different discriminants met in one expression."""


class SpecializationError(ArithmeticError):
    """A rational function was evaluated at a pole."""

    def __init__(self, value, factor):
        super().__init__(f"pole at l = {value}: denominator factor {factor} vanishes")
        self.value = value
        self.factor = factor


class UnsupportedDegree(ValueError):
    pass


def _merge_d(d1, d2):
    if d1 is None:
        return d2
    if d2 is None or d1 == d2:
        return d1
    raise DiscriminantMismatch(f"cannot mix sqrt({d1}) and sqrt({d2})")


class QuadExt:
    """``a + b*sqrt(d)`` with rational ``a``, ``b``; ``d`` is None when ``b == 0``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=None):
        a = a if type(a) is Fraction else Fraction(a)
        b = b if type(b) is Fraction else Fraction(b)
        if not b:
            d = None
        elif d not in SUPPORTED_DISCRIMINANTS:
            raise ValueError(f"unsupported discriminant {d!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, key, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def sqrt(cls, d: int) -> QuadExt:
        return cls(0, 1, d)

    @staticmethod
    def coerce(x) -> QuadExt:
        if isinstance(x, QuadExt):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadExt(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to QuadExt")

    def is_rational(self) -> bool:
        return self.d is None

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.d is None and self.a == other
        if not isinstance(other, QuadExt):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        if self.d is None:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __add__(self, other):
        if not isinstance(other, QuadExt):
            if isinstance(other, (int, Fraction)):
                return QuadExt(self.a + other, self.b, self.d)
            return NotImplemented
        return QuadExt(self.a + other.a, self.b + other.b, _merge_d(self.d, other.d))

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        if not isinstance(other, QuadExt):
            if isinstance(other, (int, Fraction)):
                return QuadExt(self.a - other, self.b, self.d)
            return NotImplemented
        return QuadExt(self.a - other.a, self.b - other.b, _merge_d(self.d, other.d))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QuadExt):
            if isinstance(other, (int, Fraction)):
                return QuadExt(self.a * other, self.b * other, self.d)
            return NotImplemented
        if other.d is None:
            return QuadExt(self.a * other.a, self.b * other.a, self.d)
        if self.d is None:
            return QuadExt(self.a * other.a, self.a * other.b, other.d)
        d = _merge_d(self.d, other.d)
        return QuadExt(self.a * other.a + self.b * other.b * d,
                       self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def conj(self) -> QuadExt:
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        if self.d is None:
            return self.a * self.a
        return self.a * self.a - self.b * self.b * self.d

    def inv(self) -> QuadExt:
        if not self:
            raise DivisionByZero("inverse of zero in Q(sqrt d)")
        if self.d is None:
            return QuadExt(1 / self.a)
        n = self.norm()
        return QuadExt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        other = QuadExt.coerce(other)
        return self * other.inv()

    def __rtruediv__(self, other):
        return QuadExt.coerce(other) * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = QuadExt(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __float__(self):
        if self.d is None:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def to_mpf(self):
        if self.d is None:
            return mpmath.mpf(self.a.numerator) / self.a.denominator
        return (mpmath.mpf(self.a.numerator) / self.a.denominator
                + mpmath.mpf(self.b.numerator) / self.b.denominator * mpmath.sqrt(self.d))

    def sort_key(self):
        return (float(self), self.a, self.b)

    def to_text(self) -> str:
        if self.d is None:
            return _frac_text(self.a)
        q = _frac_text(abs(self.b))
        sign = "-" if self.b < 0 else "+"
        head = _frac_text(self.a) if self.a else ""
        if not head and sign == "+":
            sign = ""
        surd = f"sqrt({self.d})" if q == "1" else f"{q}*sqrt({self.d})"
        return f"{head}{sign}{surd}"

    __str__ = to_text

    def __repr__(self):
        return f"QuadExt({self.to_text()!r})"

    @classmethod
    def parse(cls, text: str) -> QuadExt:
        m = _QUAD_RE.fullmatch(text.strip())
        if not m:
            raise ValueError(f"not a quadratic surd: {text!r}")
        head, sign, coeff, d = m.group("head", "sign", "coeff", "d")
        a = Fraction(head) if head else Fraction(0)
        if d is None:
            if not head:
                raise ValueError(f"empty surd text: {text!r}")
            return cls(a)
        b = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            b = -b
        return cls(a, b, int(d))


_QUAD_RE = re.compile(
    r"(?:(?P<head>[+-]?\d+(?:/\d+)?)(?=$|[+-]))?"
    r"(?:(?P<sign>[+-])?(?:(?P<coeff>\d+(?:/\d+)?)\*)?sqrt\((?P<d>\d+)\))?"
)


def _frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


ZERO_Q = QuadExt(0)
ONE_Q = QuadExt(1)


# ---------------------------------------------------------------------------
# univariate polynomials in l


class LambdaPoly:
    """Dense ascending coefficient tuple over Q(sqrt d); ``()`` is the zero polynomial."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if isinstance(c, QuadExt) else QuadExt.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, key, value):
        raise AttributeError("LambdaPoly is immutable")

    @classmethod
    def _raw(cls, coeffs: list) -> LambdaPoly:
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", tuple(coeffs))
        return p

    @classmethod
    def const(cls, c) -> LambdaPoly:
        return cls((c,))

    @classmethod
    def var(cls) -> LambdaPoly:
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self) -> QuadExt:
        return self.coeffs[-1] if self.coeffs else ZERO_Q

    def discriminant(self):
        d = None
        for c in self.coeffs:
            d = _merge_d(d, c.d)
        return d

    def __eq__(self, other):
        if not isinstance(other, LambdaPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: LambdaPoly) -> LambdaPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return LambdaPoly._raw(out)

    def __neg__(self):
        return LambdaPoly._raw([-c for c in self.coeffs])

    def __sub__(self, other: LambdaPoly) -> LambdaPoly:
        return self + (-other)

    def __mul__(self, other) -> LambdaPoly:
        if not isinstance(other, LambdaPoly):
            other = QuadExt.coerce(other)
            if not other:
                return ZERO_P
            return LambdaPoly._raw([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO_P
        if len(b) == 1:
            return LambdaPoly._raw([c * b[0] for c in a])
        if len(a) == 1:
            return LambdaPoly._raw([c * a[0] for c in b])
        out = [ZERO_Q] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return LambdaPoly._raw(out)

    __rmul__ = __mul__

    def divmod(self, other: LambdaPoly):
        if not other:
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        dv = other.coeffs
        dl = len(dv)
        if len(rem) < dl:
            return ZERO_P, self
        inv_lc = dv[-1].inv()
        quot = [ZERO_Q] * (len(rem) - dl + 1)
        for i in range(len(rem) - dl, -1, -1):
            c = rem[i + dl - 1]
            if not c:
                continue
            q = c * inv_lc
            quot[i] = q
            for j in range(dl):
                rem[i + j] = rem[i + j] - q * dv[j]
        return LambdaPoly._raw(quot), LambdaPoly._raw(rem[: dl - 1])

    def exact_div(self, other: LambdaPoly) -> LambdaPoly:
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def monic(self) -> LambdaPoly:
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        inv = self.coeffs[-1].inv()
        return LambdaPoly._raw([c * inv for c in self.coeffs])

    def derivative(self) -> LambdaPoly:
        return LambdaPoly._raw([c * i for i, c in enumerate(self.coeffs)][1:])

    def conj(self) -> LambdaPoly:
        return LambdaPoly._raw([c.conj() for c in self.coeffs])

    def __call__(self, x):
        x = QuadExt.coerce(x)
        acc = ZERO_Q
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_shift(self, s) -> LambdaPoly:
        """p(l + s)."""
        s = QuadExt.coerce(s)
        acc = ZERO_P
        lin = LambdaPoly((s, 1))
        for c in reversed(self.coeffs):
            acc = acc * lin + LambdaPoly((c,))
        return acc

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = [f"{c.to_text()}*l^{k}" for k, c in reversed(list(enumerate(self.coeffs))) if c]
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str) -> LambdaPoly:
        text = text.strip()
        if text == "0":
            return ZERO_P
        coeffs: dict[int, QuadExt] = {}
        for term in text.split(" + "):
            c, _, k = term.rpartition("*l^")
            if not _:
                raise ValueError(f"bad polynomial term {term!r}")
            k = int(k)
            coeffs[k] = coeffs.get(k, ZERO_Q) + QuadExt.parse(c)
        top = max(coeffs)
        return cls([coeffs.get(i, ZERO_Q) for i in range(top + 1)])

    def pretty(self) -> str:
        if not self.coeffs:
            return "0"
        out = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("l" if k == 1 else f"l^{k}")
            if c.d is None:
                neg = c.a < 0
                mag = _frac_text(abs(c.a))
                body = mag if not mono else (mono if mag == "1" else f"{mag}*{mono}")
            else:
                neg = False
                body = f"({c.to_text()})" + (f"*{mono}" if mono else "")
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    def __repr__(self):
        return f"LambdaPoly({self.pretty()!r})"

    __str__ = pretty


ZERO_P = LambdaPoly()
ONE_P = LambdaPoly((1,))


def poly_gcd(a: LambdaPoly, b: LambdaPoly) -> LambdaPoly:
    """Monic gcd; gcd(0, 0) = 0."""
    while b:
        a, b = b, a.divmod(b)[1]
    return a.monic()


# ---------------------------------------------------------------------------
# rational functions in l


class Scalar:
    """Reduced fraction num/den of polynomials in l; den is monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        if not isinstance(num, LambdaPoly):
            num = LambdaPoly.const(num)
        if den is None:
            den = ONE_P
        elif not isinstance(den, LambdaPoly):
            den = LambdaPoly.const(den)
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if not num:
            num, den = ZERO_P, ONE_P
        elif den != ONE_P:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lc = den.lc()
            if lc != 1:
                inv = lc.inv()
                num = num * inv
                den = den * inv
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _raw(cls, num: LambdaPoly, den: LambdaPoly) -> Scalar:
        s = object.__new__(cls)
        object.__setattr__(s, "num", num)
        object.__setattr__(s, "den", den)
        object.__setattr__(s, "_hash", None)
        return s

    @classmethod
    def lam(cls) -> Scalar:
        return cls._raw(LambdaPoly.var(), ONE_P)

    @staticmethod
    def coerce(x) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar._raw(LambdaPoly.const(x), ONE_P) if x else ZERO
        if isinstance(x, QuadExt):
            return Scalar._raw(LambdaPoly((x,)), ONE_P) if x else ZERO
        if isinstance(x, LambdaPoly):
            return Scalar._raw(x, ONE_P)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    def __bool__(self):
        return bool(self.num)

    def is_const(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def const_value(self) -> QuadExt:
        if not self.is_const():
            raise ValueError(f"{self} depends on l")
        return self.num.coeffs[0] if self.num.coeffs else ZERO_Q

    def discriminant(self):
        return _merge_d(self.num.discriminant(), self.den.discriminant())

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den is ONE_P or self.den == ONE_P:
            if other.den == ONE_P:
                return Scalar._normal_poly(self.num + other.num)
            return Scalar(self.num * other.den + other.num, other.den)
        if other.den == ONE_P:
            return Scalar(self.num + other.num * self.den, self.den)
        if self.den == other.den:
            return Scalar(self.num + other.num, self.den)
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    @staticmethod
    def _normal_poly(p: LambdaPoly) -> Scalar:
        return Scalar._raw(p, ONE_P) if p else ZERO

    def __neg__(self):
        return Scalar._raw(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction, QuadExt)):
                if not other:
                    return ZERO
                return Scalar._raw(self.num * QuadExt.coerce(other), self.den)
            other = Scalar.coerce(other)
        if not self.num or not other.num:
            return ZERO
        if self.den == ONE_P and other.den == ONE_P:
            return Scalar._raw(self.num * other.num, ONE_P)
        if other.is_const():
            return Scalar._raw(self.num * other.num.coeffs[0], self.den)
        if self.is_const():
            return Scalar._raw(other.num * self.num.coeffs[0], other.den)
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self) -> Scalar:
        if not self.num:
            raise DivisionByZero("inverse of the zero rational function")
        return Scalar(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        if other.is_const():
            if not other.num:
                raise DivisionByZero("division by zero")
            return Scalar._raw(self.num * other.num.coeffs[0].inv(), self.den)
        return self * other.inv()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def conj(self) -> Scalar:
        return Scalar(self.num.conj(), self.den.conj())

    def eval_at(self, value) -> QuadExt:
        """Substitute l = value; raises SpecializationError at a pole."""
        value = QuadExt.coerce(value)
        d = self.den(value)
        if not d:
            raise SpecializationError(value, self.den)
        return self.num(value) / d

    def specialize(self, value) -> Scalar:
        return Scalar.coerce(self.eval_at(value))

    def shift(self, s) -> Scalar:
        """f(l + s)."""
        return Scalar(self.num.compose_shift(s), self.den.compose_shift(s))

    def sort_key(self):
        if self.is_const():
            return (0, self.const_value().sort_key())
        # formal weights l + c sort after constants, by offset
        num = self.num
        return (1, self.den.degree, num.degree,
                tuple(float(c) for c in reversed(num.coeffs)))

    def to_text(self) -> str:
        if self.is_const():
            return self.const_value().to_text()
        return f"({self.num.to_text()})/({self.den.to_text()})"

    @classmethod
    def parse(cls, text: str) -> Scalar:
        text = text.strip()
        if text.startswith("(") and ")/(" in text and text.endswith(")"):
            n, d = text[1:-1].split(")/(", 1)
            return cls(LambdaPoly.parse(n), LambdaPoly.parse(d))
        return parse_weight(text)

    def pretty(self) -> str:
        if self.den == ONE_P:
            return self.num.pretty()
        n = self.num.pretty()
        if self.num.degree > 0 and len([c for c in self.num.coeffs if c]) > 1:
            n = f"({n})"
        return f"{n}/({self.den.pretty()})"

    __str__ = pretty

    def __repr__(self):
        return f"Scalar({self.pretty()!r})"


ZERO = Scalar._raw(ZERO_P, ONE_P)
ONE = Scalar._raw(ONE_P, ONE_P)
LAMBDA = Scalar.lam()

Number = Union[int, Fraction, QuadExt, Scalar]


def as_scalar(x) -> Scalar:
    return Scalar.coerce(x)


# ---------------------------------------------------------------------------
# named constants

SQRT19 = QuadExt.sqrt(19)
SQRT39 = QuadExt.sqrt(39)


def _q(a, b=0, d=19) -> QuadExt:
    return QuadExt(Fraction(a), Fraction(b), d)


CONSTANTS: dict[str, QuadExt] = {
    "a1": _q(Fraction(-5, 2), Fraction(-1, 2)),
    "a2": _q(Fraction(-5, 2), Fraction(1, 2)),
    "alpha1": _q(Fraction(-22, 4), Fraction(-5, 4)),
    "alpha2": _q(Fraction(-22, 4), Fraction(5, 4)),
    "beta1": _q(Fraction(31, 2), Fraction(7, 2)),
    "beta2": _q(Fraction(31, 2), Fraction(-7, 2)),
    "gamma1": _q(Fraction(25, 2), Fraction(7, 2)),
    "gamma2": _q(Fraction(25, 2), Fraction(-7, 2)),
    "eta1": _q(7 * 76437, 7 * 53739),
    "eta2": _q(7 * 76437, -7 * 53739),
    "theta1": _q(64 * 1160123, 64 * 30689),
    "theta2": _q(64 * 1160123, -64 * 30689),
    "mu1": _q(8947638, 205273),
    "mu2": _q(8947638, -205273),
    "nu1": _q(96 * 474174, 96 * 108783),
    "nu2": _q(96 * 474174, -96 * 108783),
}

CONJUGATE_PAIRS = [(f"{base}1", f"{base}2")
                   for base in ("a", "alpha", "beta", "gamma", "eta", "theta", "mu", "nu")]

# roots of 2l^2 + 14l + 5
RESONANT_K8 = (QuadExt(Fraction(-7, 2), Fraction(-1, 2), 39),
               QuadExt(Fraction(-7, 2), Fraction(1, 2), 39))


# ---------------------------------------------------------------------------
# weights as text: "l", "l+2", "a1-3", "-4", "7/3", "-7/2+1/2*sqrt(39)"

_WEIGHT_RE = re.compile(r"(?P<base>l|a1|a2)?(?P<off>[+-]\d+(?:/\d+)?)?")


def parse_weight(text: str) -> Scalar:
    text = text.strip().replace(" ", "")
    m = _WEIGHT_RE.fullmatch(text)
    if m and m.group("base"):
        base = LAMBDA if m.group("base") == "l" else Scalar.coerce(CONSTANTS[m.group("base")])
        off = Fraction(m.group("off")) if m.group("off") else Fraction(0)
        return base + off
    if text.startswith("(") and ")/(" in text:
        return Scalar.parse(text)
    return Scalar.coerce(QuadExt.parse(text))


def weight_text(w: Scalar) -> str:
    """Inverse of :func:`parse_weight` for weights of the form base + rational."""
    if w.is_const():
        v = w.const_value()
        for name in ("a1", "a2"):
            if v.d not in (None, CONSTANTS[name].d):
                continue
            off = v - CONSTANTS[name]
            if off.is_rational():
                return name + _offset_text(off.a)
        return v.to_text()
    if w.den == ONE_P and w.num.degree == 1 and w.num.coeffs[1] == 1 and w.num.coeffs[0].is_rational():
        return "l" + _offset_text(w.num.coeffs[0].a)
    return w.to_text()


def _offset_text(q: Fraction) -> str:
    if not q:
        return ""
    return ("+" if q > 0 else "-") + _frac_text(abs(q))


# ---------------------------------------------------------------------------
# roots in Q and the supported quadratic fields


def squarefree_part(p: LambdaPoly) -> LambdaPoly:
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g).monic() if g.degree > 0 else p.monic()


def _squarefree_int(n: int) -> tuple[int, int]:
    """n = s^2 * r with r square-free; returns (s, r)."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, r, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            r *= p
        p += 1
    return s, r * n * sign


def _sqrt_in_field(q: Fraction):
    """Square root of a rational inside Q or a supported Q(sqrt d), else None."""
    if q == 0:
        return QuadExt(0)
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    sn, rn = _squarefree_int(num * den)
    # sqrt(num/den) = sqrt(num*den)/den = sn*sqrt(rn)/den
    if rn == 1:
        return QuadExt(Fraction(sn, den))
    if rn in SUPPORTED_DISCRIMINANTS:
        return QuadExt(0, Fraction(sn, den), rn)
    return None


def _numeric_real_roots(p: LambdaPoly, dps: int = 60):
    coeffs = [c.to_mpf() for c in reversed(p.coeffs)]
    with mpmath.workdps(dps):
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
        except mpmath.libmp.libhyper.NoConvergence:
            roots = mpmath.polyroots(coeffs, maxsteps=2000, extraprec=12 * dps)
        out = []
        for r in roots:
            if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 3):
                out.append(mpmath.re(r))
        return out


def _recognize(x, bound=10**15) -> Fraction:
    return Fraction(mpmath.nstr(x, 50)).limit_denominator(bound)


def find_roots(p: LambdaPoly):
    """All roots of ``p`` in Q or Q(sqrt d) for supported d, plus the residual factor.

    Candidates come from high-precision numerics on the square-free part; every
    reported root is verified exactly, so numerics only decide what to try.
    """
    if not p:
        raise ValueError("roots of the zero polynomial")
    if p.discriminant() is not None:
        return _roots_over_surd(p)
    work = squarefree_part(p)
    roots: list[QuadExt] = []
    if work.degree <= 0:
        return roots, ONE_P
    # rational roots
    for r in _numeric_real_roots(work):
        c = QuadExt(_recognize(r))
        if not work(c):
            roots.append(c)
            work = work.exact_div(LambdaPoly((-c, 1)))
    # quadratic factors with real conjugate roots
    changed = True
    while changed and work.degree >= 2:
        changed = False
        real = _numeric_real_roots(work)
        for i in range(len(real)):
            for j in range(i + 1, len(real)):
                s = _recognize(real[i] + real[j])
                m = _recognize(real[i] * real[j])
                quad = LambdaPoly((m, -s, 1))
                q, rem = work.divmod(quad)
                if rem:
                    continue
                disc = s * s - 4 * m
                sq = _sqrt_in_field(disc)
                if sq is None or sq.is_rational():
                    continue
                half = Fraction(1, 2)
                roots.append(QuadExt(s * half) + sq * half)
                roots.append(QuadExt(s * half) - sq * half)
                work = q
                changed = True
                break
            if changed:
                break
    roots.sort(key=lambda r: r.sort_key())
    return roots, work.monic()


def _roots_over_surd(p: LambdaPoly):
    normp = (p * p.conj())
    normp = LambdaPoly([QuadExt(c.a) for c in normp.coeffs])
    cands, _ = find_roots(normp)
    roots = []
    work = p.monic()
    for c in cands:
        try:
            v = work(c)
        except DiscriminantMismatch:
            continue
        if not v:
            roots.append(c)
            while True:
                q, r = work.divmod(LambdaPoly((-c, 1)))
                if r:
                    break
                work = q
    roots.sort(key=lambda r: r.sort_key())
    return roots, squarefree_part(work) if work.degree > 0 else ONE_P


def roots_in_quad_ext(p: LambdaPoly):
    """Roots of a polynomial of degree at most 4; see :func:`find_roots`."""
    if p.degree > 4:
        raise UnsupportedDegree(f"degree {p.degree} > 4")
    return find_roots(p)


def lcm_poly(polys: Sequence[LambdaPoly]) -> LambdaPoly:
    def _lcm(a, b):
        return (a * b).exact_div(poly_gcd(a, b)).monic()
    return reduce(_lcm, polys, ONE_P)
