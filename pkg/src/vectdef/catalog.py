"""Named 1-cocycles, 2-cocycles and coboundary witnesses.

Entries are addressed by string keys such as ``C[l,l+4]``, ``Ctilde[0,1]``,
``Omega[a1,a1+6]`` or ``bbar[0,5]``.  A key with ``l`` in it is a family and
may be instantiated at any weight; a key with concrete weights is a single
cochain.  Formulas are stored as jet templates whose coefficients may depend
on the source weight ``l``.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction as Fr
from typing import Callable

from .cochains import Cochain1, Cochain2, cup
from .jets import JetPoly
from .scalar import CONSTANTS, LAMBDA, Scalar, parse_weight, weight_text


class CatalogError(KeyError):
    pass


def _s(x) -> Scalar:
    return Scalar.coerce(x) if not isinstance(x, Scalar) else x


L = LAMBDA


def _one(terms: dict) -> JetPoly:
    """One-slot template from {(a, e): coeff}: sum coeff * X^(a) f^(e)."""
    return JetPoly(1, {m: _s(c) for m, c in terms.items()})


def _anti(terms: dict) -> JetPoly:
    """Two-slot template from {(a, b, e): coeff}, antisymmetrized: sum ... - (X<->Y)."""
    return JetPoly(2, {m: _s(c) for m, c in terms.items()}).antisymmetrize()


def _q(name: str) -> Scalar:
    return Scalar.coerce(CONSTANTS[name])


# ------------------------------------------------------------- 1-cocycles

def _c_ll(w):
    return _one({(1, 0): 1})


def _c_01(w):
    return _one({(2, 0): 1})


def _ct_01(w):
    return _one({(2, 0): 1, (1, 1): 1})


def _c_l2(w):
    return _one({(3, 0): 1, (2, 1): 2})


def _c_l3(w):
    return _one({(3, 1): 1, (2, 2): 1})


def _c_l4(w):
    return _one({(5, 0): -w, (4, 1): 1, (3, 2): -6, (2, 3): -4})


def _c_05(w):
    return _one({(5, 1): 2, (4, 2): -5, (3, 3): 10, (2, 4): 5})


def _c_m41(w):
    return _one({(6, 0): 12, (5, 1): 22, (4, 2): 5, (3, 3): -10, (2, 4): -5})


def _c_a6(i):
    def build(w):
        return _one({(7, 0): _q(f"alpha{i}"), (6, 1): -_q(f"beta{i}"),
                     (5, 2): -_q(f"gamma{i}"), (4, 3): -5, (3, 4): 5, (2, 5): 2})
    return build


# ------------------------------------------------------------- 2-cocycles

def _om_01(w):
    return _anti({(1, 2, 0): 1})


def _om_l2(w):
    return _anti({(3, 1, 0): 1, (2, 1, 1): 2})


def _om_l3(w):
    return _anti({(2, 3, 0): 1, (3, 1, 1): 1})


def _om_l4(w):
    return _anti({(1, 5, 0): -w, (1, 4, 1): 1, (1, 3, 2): -6, (1, 2, 3): -4})


def _om_05(w):
    return _anti({(5, 2, 0): 1, (4, 3, 0): 1, (4, 2, 1): 4, (3, 2, 2): 3})


def _omt_05(w):
    return _anti({(5, 1, 1): 2, (1, 4, 2): 5, (3, 1, 3): 10, (2, 1, 4): 5})


def _om_m41(w):
    return _anti({(4, 2, 1): 2, (3, 2, 2): 3})


def _omt_m41(w):
    return _anti({(6, 1, 0): 12, (5, 1, 1): 22, (4, 1, 2): 5, (1, 3, 3): 10, (1, 2, 4): 5})


def _om_a6(i):
    def build(w):
        return _anti({(5, 2, 1): 1, (4, 3, 1): 1, (4, 2, 2): 3, (3, 2, 3): 2})
    return build


def _omt_a6(i):
    def build(w):
        return _anti({(7, 1, 0): _q(f"alpha{i}"), (1, 6, 1): _q(f"beta{i}"),
                      (1, 5, 2): _q(f"gamma{i}"), (1, 4, 3): 5, (3, 1, 4): 5, (2, 1, 5): 2})
    return build


# --------------------------------------------------------- witness 1-cochains

def _b_l4(w):
    return _one({(5, 0): Fr(2, 5) * (w - 1), (4, 1): -2})


def _bt_04(w):
    return _one({(5, 0): Fr(-1, 5), (2, 3): 1})


def _bt_m31(w):
    return _one({(5, 0): Fr(-3, 10), (4, 1): Fr(-1, 2)})


def _b_l5(w):
    pre = Scalar(-1) / (w * w + 6 * w + 8)
    return _one({(6, 0): pre * Fr(7, 30) * (w + 4),
                 (5, 1): pre * (10 * w * w + 39 * w - 4) / (10 * w),
                 (4, 2): pre * (4 * w * w + 17 * w + 4) / (2 * w),
                 (3, 3): pre * (3 * w * w + 11 * w - 4) / (3 * w)})


def _bt_l5(w):
    pre = Scalar(-1) / (w * w + 6 * w + 8)
    return _one({(6, 0): pre * Fr(-7, 30) * w, (5, 1): pre * Fr(21, 10),
                 (4, 2): pre * (w + Fr(11, 2)), (3, 3): pre * (w + Fr(13, 3))})


def _b_m23(w):
    return _one({(5, 1): Fr(-1, 12), (4, 2): Fr(-1, 3), (3, 3): Fr(-2, 3), (2, 4): Fr(-7, 12)})


def _bt_m23(w):
    return _one({(5, 1): Fr(-7, 12), (4, 2): Fr(-5, 3), (3, 3): Fr(-5, 3), (2, 4): -1})


def _b_05(w):
    return _one({(6, 0): -1, (4, 2): -55, (1, 5): -20})


def _bt_05(w):
    return _one({(6, 0): -1, (4, 2): -45, (2, 4): -15, (1, 5): Fr(1, 5)})


def _bb_05(w):
    return _one({(6, 0): 3, (4, 2): 135, (2, 4): 45})


def _bt_m41(w):
    return _one({(5, 1): Fr(-17, 13), (4, 2): Fr(-30, 13), (2, 4): Fr(-30, 13),
                 (3, 3): Fr(-30, 13), (1, 5): Fr(1, 5)})


def _b_m41(w):
    return _one({(5, 1): Fr(-17, 13), (4, 2): Fr(-30, 13), (2, 4): Fr(-30, 13),
                 (3, 3): Fr(-30, 13)})


def _bb_m41(w):
    return _one({(5, 1): Fr(36, 13), (4, 2): Fr(495, 52), (2, 4): Fr(495, 52),
                 (3, 3): Fr(345, 26)})


# The k = 6 witnesses carry the prefactor printed as "1/14 l(2l^2+10l+3)".
# Both readings are kept: multiply (``mul``) and divide (``div``).

def _k6_prefactor(w, reading: str) -> Scalar:
    p = w * (2 * w * w + 10 * w + 3)
    return p / 14 if reading == "mul" else Scalar(1) / (14 * p)


def _k6(polys: dict, reading: str):
    def build(w):
        pre = _k6_prefactor(w, reading)
        return _one({m: pre * sum((c * w ** i for i, c in enumerate(coeffs)), Scalar(0))
                     for m, coeffs in polys.items()})
    return build


# coefficient lists in ascending powers of l; monomials as printed (X^(a) f^(e))
_B_L6 = {(6, 0): [-12, -9, 97, 90, 24], (5, 2): [-72, -404, -41, 127, 60],
         (4, 3): [-180, -163, 83, 160, 80], (3, 4): [-240, -922, -13, 155, 60],
         (2, 5): [-180, -569, -15, 90, 24]}
_BT_L6 = {(6, 0): [0, -1, -12], (5, 2): [0, -20, -88], (4, 3): [0, -32, -68],
          (2, 5): [0, 4, 12]}
_BB_L6 = {(6, 0): [0, 0, -97, -118], (5, 2): [0, -16, -183, -118],
          (4, 3): [0, -5, -195, -580], (3, 4): [0, -58, -323, -435],
          (2, 5): [0, -103, -377, -174]}


def _x5f2(w):
    return _one({(5, 2): 1})


# ------------------------------------------------------------------ registry

@dataclass(frozen=True)
class Entry:
    key: str
    kind: str                      # "cocycle1", "cocycle2", "witness"
    shift: int
    weight: Scalar | None          # None for families defined at every weight
    build: Callable[[Scalar], JetPoly]
    recipe: tuple | None = None    # ((offset, shift, tilde) outer, (...) inner), offsets from the source weight
    note: str = ""
    tags: tuple = field(default_factory=tuple)

    @property
    def arity(self) -> int:
        return 2 if self.kind == "cocycle2" else 1

    def instantiate(self, weight=None):
        if self.weight is not None:
            if weight is not None and Scalar.coerce(weight) != self.weight:
                raise CatalogError(f"{self.key} lives only at weight {weight_text(self.weight)}")
            w = self.weight
        else:
            w = L if weight is None else Scalar.coerce(weight)
        body = self.build(w)
        cls = Cochain2 if self.arity == 2 else Cochain1
        return cls(w, self.shift, body)


def _fixed(x) -> Scalar:
    return Scalar.coerce(x)


A1, A2 = _q("a1"), _q("a2")


def _build_entries() -> list[Entry]:
    E = []
    add = E.append
    # basic 1-cocycle families
    add(Entry("C[l,l]", "cocycle1", 0, None, _c_ll))
    add(Entry("C[0,1]", "cocycle1", 1, _fixed(0), _c_01))
    add(Entry("Ctilde[0,1]", "cocycle1", 1, _fixed(0), _ct_01))
    add(Entry("C[l,l+2]", "cocycle1", 2, None, _c_l2))
    add(Entry("C[l,l+3]", "cocycle1", 3, None, _c_l3))
    add(Entry("C[l,l+4]", "cocycle1", 4, None, _c_l4))
    add(Entry("C[0,5]", "cocycle1", 5, _fixed(0), _c_05))
    add(Entry("C[-4,1]", "cocycle1", 5, _fixed(-4), _c_m41))
    add(Entry("C[a1,a1+6]", "cocycle1", 6, A1, _c_a6(1)))
    add(Entry("C[a2,a2+6]", "cocycle1", 6, A2, _c_a6(2)))
    # displayed 2-cocycles with their cup-product recipes
    add(Entry("Omega[0,1]", "cocycle2", 1, _fixed(0), _om_01, ((1, 0, False), (0, 1, False))))
    add(Entry("Omega[l,l+2]", "cocycle2", 2, None, _om_l2, ((0, 2, False), (0, 0, False))))
    add(Entry("Omega[l,l+3]", "cocycle2", 3, None, _om_l3, ((0, 3, False), (0, 0, False))))
    add(Entry("Omega[l,l+4]", "cocycle2", 4, None, _om_l4, ((4, 0, False), (0, 4, False))))
    add(Entry("Omega[0,5]", "cocycle2", 5, _fixed(0), _om_05, ((2, 3, False), (0, 2, False))))
    add(Entry("Omegatilde[0,5]", "cocycle2", 5, _fixed(0), _omt_05, ((5, 0, False), (0, 5, False))))
    add(Entry("Omega[-4,1]", "cocycle2", 5, _fixed(-4), _om_m41, ((3, 2, False), (0, 3, False))))
    add(Entry("Omegatilde[-4,1]", "cocycle2", 5, _fixed(-4), _omt_m41, ((5, 0, False), (0, 5, False))))
    for i, a in ((1, A1), (2, A2)):
        add(Entry(f"Omega[a{i},a{i}+6]", "cocycle2", 6, a, _om_a6(i),
                  ((3, 3, False), (0, 3, False))))
        add(Entry(f"Omegatilde[a{i},a{i}+6]", "cocycle2", 6, a, _omt_a6(i),
                  ((6, 0, False), (0, 6, False))))
    # witnesses
    add(Entry("b[l,l+4]", "witness", 4, None, _b_l4))
    add(Entry("btilde[0,4]", "witness", 4, _fixed(0), _bt_04))
    add(Entry("btilde[-3,1]", "witness", 4, _fixed(-3), _bt_m31))
    add(Entry("b[l,l+5]", "witness", 5, None, _b_l5))
    add(Entry("btilde[l,l+5]", "witness", 5, None, _bt_l5))
    add(Entry("b[-2,3]", "witness", 5, _fixed(-2), _b_m23))
    add(Entry("btilde[-2,3]", "witness", 5, _fixed(-2), _bt_m23))
    add(Entry("b[0,5]", "witness", 5, _fixed(0), _b_05))
    add(Entry("btilde[0,5]", "witness", 5, _fixed(0), _bt_05))
    add(Entry("bbar[0,5]", "witness", 5, _fixed(0), _bb_05))
    add(Entry("btilde[-4,1]", "witness", 5, _fixed(-4), _bt_m41))
    add(Entry("b[-4,1]", "witness", 5, _fixed(-4), _b_m41))
    add(Entry("bbar[-4,1]", "witness", 5, _fixed(-4), _bb_m41))
    for reading in ("mul", "div"):
        suffix = "" if reading == "div" else "@mul"
        add(Entry(f"b[l,l+6]{suffix}", "witness", 6, None, _k6(_B_L6, reading), tags=(reading,)))
        add(Entry(f"btilde[l,l+6]{suffix}", "witness", 6, None, _k6(_BT_L6, reading), tags=(reading,)))
        add(Entry(f"bbar[l,l+6]{suffix}", "witness", 6, None, _k6(_BB_L6, reading), tags=(reading,)))
    add(Entry("bshape[l,l+6]", "witness", 6, None, _x5f2))
    return E


_ENTRIES = {e.key: e for e in _build_entries()}


# ------------------------------------------------------------ key parsing

_KEY_RE = re.compile(r"(?P<name>[A-Za-z]+)\[(?P<src>[^,\]]+),(?P<tgt>[^\]]+)\](?P<suffix>@\w+)?")


def parse_key(key: str):
    m = _KEY_RE.fullmatch(key.replace(" ", ""))
    if not m:
        raise CatalogError(f"malformed catalog key {key!r}")
    return m.group("name"), parse_weight(m.group("src")), parse_weight(m.group("tgt")), m.group("suffix") or ""


def _shift_of(src: Scalar, tgt: Scalar) -> int:
    d = tgt - src
    if not d.is_const() or not d.const_value().is_rational() or d.const_value().a.denominator != 1:
        raise CatalogError("source and target weights must differ by an integer")
    return int(d.const_value().a)


def entry_keys() -> list[str]:
    return list(_ENTRIES)


def entry(key: str) -> Entry:
    try:
        return _ENTRIES[key]
    except KeyError:
        raise CatalogError(f"unknown catalog entry {key!r}") from None


def resolve(key: str):
    """Instantiate any addressable cochain.

    Exact registry keys are tried first.  Otherwise ``name[w,w+k]`` is matched
    against the families ``name[l,l+k]`` (instantiated at w) or, for weights
    in the a1/a2 orbit, against the fixed entries.
    """
    if key in _ENTRIES:
        return _ENTRIES[key].instantiate()
    name, src, tgt, suffix = parse_key(key)
    k = _shift_of(src, tgt)
    for e in _ENTRIES.values():
        ename, esrc, etgt, esuf = parse_key(e.key)
        if ename != name or esuf != suffix or e.shift != k:
            continue
        if e.weight is None:
            return e.instantiate(src)
        if e.weight == src:
            return e.instantiate()
    if name == "Omega":
        # cup-product classes without a displayed formula
        return class_recipe(src, k)
    raise CatalogError(f"no catalog entry matches {key!r}")


def cocycle(weight, shift: int, tilde: bool = False) -> Cochain1:
    """The basic 1-cocycle on D(weight, weight+shift)."""
    w = Scalar.coerce(weight)
    for key, c in families_at(w, shift):
        if key.startswith("Ctilde") == tilde:
            return c
    raise CatalogError(f"no {'tilde ' if tilde else ''}cocycle on block ({weight_text(w)}, +{shift})")


def families_at(weight, shift: int) -> list[tuple[str, Cochain1]]:
    """Basic 1-cocycles living on D(weight, weight+shift), as (family key, cochain)."""
    w = Scalar.coerce(weight)
    out = []
    if shift in (0, 2, 3, 4):
        key = {0: "C[l,l]", 2: "C[l,l+2]", 3: "C[l,l+3]", 4: "C[l,l+4]"}[shift]
        out.append((key, _ENTRIES[key].instantiate(w)))
    elif shift == 1 and w == 0:
        out.append(("C[0,1]", _ENTRIES["C[0,1]"].instantiate()))
        out.append(("Ctilde[0,1]", _ENTRIES["Ctilde[0,1]"].instantiate()))
    elif shift == 5 and w == 0:
        out.append(("C[0,5]", _ENTRIES["C[0,5]"].instantiate()))
    elif shift == 5 and w == -4:
        out.append(("C[-4,1]", _ENTRIES["C[-4,1]"].instantiate()))
    elif shift == 6 and w in (A1, A2):
        key = "C[a1,a1+6]" if w == A1 else "C[a2,a2+6]"
        out.append((key, _ENTRIES[key].instantiate()))
    return out


def table1_keys() -> list[str]:
    return [k for k, e in _ENTRIES.items() if e.kind == "cocycle1"]


def recipe_value(e: Entry, weight=None) -> Cochain2:
    """Evaluate an entry's cup-product recipe at its (or the given) source weight."""
    if e.recipe is None:
        raise CatalogError(f"{e.key} has no cup-product recipe")
    w = e.weight if e.weight is not None else (L if weight is None else Scalar.coerce(weight))
    (o1, k1, t1), (o2, k2, t2) = e.recipe
    return cup(cocycle(w + o1, k1, t1), cocycle(w + o2, k2, t2))


def class_recipe(weight, shift: int) -> Cochain2:
    """Cup-product classes for shifts beyond the displayed formulas."""
    w = Scalar.coerce(weight)
    if shift == 7:
        return cup(cocycle(w + 3, 4), cocycle(w, 3))
    if shift == 8:
        return cup(cocycle(w + 4, 4), cocycle(w, 4))
    raise CatalogError(f"no class recipe for shift {shift} at {weight_text(w)}")


# Cup recipes for the shift 9 and 10 classes, keyed by the source weight.
def sparse_class_recipes() -> list[tuple[str, Scalar, int, tuple[tuple, tuple]]]:
    """(label, weight, shift, ((outer w, outer k), (inner w, inner k)))."""
    out = []
    for i, a in ((1, A1), (2, A2)):
        out.append((f"Omega[a{i},a{i}+9]", a, 9, ((a + 6, 3), (a, 6))))
        out.append((f"Omega[a{i}-3,a{i}+6]", a - 3, 9, ((a, 6), (a - 3, 3))))
        out.append((f"Omega[a{i},a{i}+10]", a, 10, ((a + 6, 4), (a, 6))))
        out.append((f"Omega[a{i}-4,a{i}+6]", a - 4, 10, ((a, 6), (a - 4, 4))))
    out.append(("Omega[-8,1]", _fixed(-8), 9, ((_fixed(-4), 5), (_fixed(-8), 4))))
    out.append(("Omega[0,9]", _fixed(0), 9, ((_fixed(5), 4), (_fixed(0), 5))))
    out.append(("Omega[-4,5]", _fixed(-4), 9, ((_fixed(1), 4), (_fixed(-4), 5))))
    return out


def evaluate_recipe(recipe) -> Cochain2:
    (ow, ok), (iw, ik) = recipe
    return cup(cocycle(ow, ok), cocycle(iw, ik))


def declared_classes(weight, shift: int, displayed: bool = False) -> list[tuple[str, Cochain2]]:
    """Catalog 2-cocycles registered for D(weight, weight+shift), in display order.

    Classes are the cup-product recipes that define them; ``displayed=True``
    returns the printed formulas instead (these differ from the recipes by a
    sign or by a non-cocycle typo on some blocks, see ``verify_recipes``).
    """
    w = Scalar.coerce(weight)
    out = []
    for e in _ENTRIES.values():
        if e.kind != "cocycle2" or e.shift != shift:
            continue
        if e.weight is None:
            if shift == 1:
                continue
            out.append((e.key, e.instantiate(w) if displayed else recipe_value(e, w)))
        elif e.weight == w:
            out.append((e.key, e.instantiate() if displayed else recipe_value(e)))
    if shift in (7, 8):
        tag = f"Omega[{weight_text(w)},{weight_text(w + shift)}]"
        out.append((tag, class_recipe(w, shift)))
    for label, sw, k, rec in sparse_class_recipes():
        if k == shift and sw == w:
            out.append((label, evaluate_recipe(rec)))
    return out


def catalog_hash() -> str:
    """Digest of every registry entry instantiated at the formal weight."""
    h = hashlib.sha256()
    for key in sorted(_ENTRIES):
        c = _ENTRIES[key].instantiate()
        h.update(key.encode())
        h.update(json.dumps(c.to_json(), sort_keys=True).encode())
    return h.hexdigest()[:16]


def export_json(key: str, weight=None) -> dict:
    e = entry(key) if key in _ENTRIES else None
    c = e.instantiate(weight) if e else resolve(key)
    return {"key": key, **c.to_json()}
