"""Printed second-order conditions, one record per block, for comparison with derived ones.

Conditions are written with ``l`` for a formal weight.  ``compare`` says how a
derived list is matched: ``exact`` (equal after normalization), ``ideal``
(same span) or ``proportional`` (each printed condition is a scalar multiple
of a derived one, one to one).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .scalar import CONSTANTS, LAMBDA, Scalar, parse_weight
from .tpoly import Param, TPoly


def _split_top(text: str, seps: str) -> list[tuple[str, str]]:
    """Split at separators outside brackets; returns (separator before, piece) pairs."""
    out, depth, cur, sep = [], 0, "", ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch in seps and depth == 0:
            if cur.strip():
                out.append((sep, cur.strip()))
            sep, cur = ch, ""
        else:
            cur += ch
    if cur.strip():
        out.append((sep, cur.strip()))
    return out


def parse_condition(text: str, symbols: dict | None = None) -> TPoly:
    """Parse ``"30*t[0,0]*t[0,5] - 12*t[0,1]*t[1,5] + eta1*t[a1-2,a1]*t[a1,a1+6]"``.

    A coefficient factor is a rational, a name from ``symbols`` or CONSTANTS,
    or a bracketed expression linear in l such as ``(2*l+13)``.
    """
    syms = dict(CONSTANTS)
    syms.update(symbols or {})
    compact = text.replace(" ", "")
    if not compact or compact[-1] in "+-*" or "**" in compact or re.search(r"[+-]\*|\*[+-]", compact):
        raise ValueError(f"malformed condition {text!r}")
    out = TPoly()
    for sign, term in _split_top(text, "+-"):
        c = Scalar(-1) if sign == "-" else Scalar(1)
        params = []
        for _, factor in _split_top(term, "*"):
            if re.fullmatch(r"(t|ttilde)\[[^\]]+\]", factor):
                params.append(Param.parse(factor))
            else:
                c = c * _coefficient(factor, syms)
        if not params:
            raise ValueError(f"term without parameters in {text!r}")
        out = out + TPoly.monomial(sorted(params, key=Param.sort_key), c)
    return out


def _coefficient(text: str, syms: dict) -> Scalar:
    text = text.strip().rstrip("*").strip()
    value = Scalar(1)
    for factor in _split_product(text):
        if factor in syms:
            value = value * Scalar.coerce(syms[factor])
        elif factor.startswith("("):
            value = value * _linear_in_l(factor[1:-1])
        else:
            value = value * Scalar.coerce(Fraction(factor))
    return value


def _split_product(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur.strip())
    return parts


def _linear_in_l(text: str) -> Scalar:
    """a*l+b style expressions, e.g. ``2*l+13`` or ``1-2*l``."""
    total = Scalar(0)
    for sign, body in re.findall(r"([+-]?)\s*([^+-]+)", text.replace(" ", "")):
        s = -1 if sign == "-" else 1
        if body.endswith("l"):
            coef = body[:-1].rstrip("*") or "1"
            total = total + LAMBDA * Scalar.coerce(Fraction(coef)) * s
        else:
            total = total + Scalar.coerce(Fraction(body)) * s
    return total


@dataclass(frozen=True)
class PublishedBlock:
    id: str
    weight: str                  # source weight, "l" for generic blocks
    shift: int
    conditions: tuple[str, ...]
    compare: str                 # "exact", "ideal" or "proportional"
    symbols: tuple = ()          # names of derived constants used in the conditions
    note: str = ""

    def source(self) -> Scalar:
        return LAMBDA if self.weight == "l" else parse_weight(self.weight)

    def polys(self, symbols: dict | None = None) -> list[TPoly]:
        return [parse_condition(c, symbols) for c in self.conditions]


# low shifts: equal after normalization
_LOW = [
    PublishedBlock("k1-0", "0", 1, ("t[0,1]*t[0,0] - t[0,1]*t[1,1] - t[1,1]*ttilde[0,1]",), "exact"),
    PublishedBlock("k2-generic", "l", 2, ("t[l,l+2]*t[l,l] - t[l,l+2]*t[l+2,l+2]",), "exact"),
    PublishedBlock("k3-generic", "l", 3, ("t[l,l+3]*t[l,l] - t[l,l+3]*t[l+3,l+3]",), "exact"),
]

# middle shifts: same ideal per block
_MID = [
    PublishedBlock("k4-generic", "l", 4, ("t[l,l+4]*t[l,l] - t[l,l+4]*t[l+4,l+4]",), "ideal"),
    PublishedBlock("k4-(-3)", "-3", 4,
                   ("t[-3,1]*t[-3,-3] - t[-3,1]*t[1,1] - 1/10*t[-3,0]*ttilde[0,1]",), "ideal"),
    PublishedBlock("k4-0", "0", 4, ("t[0,4]*t[0,0] - t[0,4]*t[4,4] + 1/10*ttilde[0,1]*t[1,4]",), "ideal"),
    PublishedBlock("k5-0", "0", 5,
                   ("30*t[0,0]*t[0,5] - 12*t[0,1]*t[1,5] - 12*ttilde[0,1]*t[1,5] + t[0,2]*t[2,5]",
                    "t[0,0]*t[0,5] - 2/5*ttilde[0,1]*t[1,5] - t[0,5]*t[5,5]"), "ideal"),
    PublishedBlock("k5-(-4)", "-4", 5,
                   ("30*t[-4,-4]*t[-4,1] - 12*t[-4,0]*t[0,1] - 12*t[-4,0]*ttilde[0,1] + t[-4,-1]*t[-1,1]",
                    "t[-4,1]*t[1,1] + 2/5*t[-4,0]*ttilde[0,1] - t[-4,-4]*t[-4,1]"), "ideal"),
]
for i in (1, 2):
    a = f"a{i}"
    _MID.append(PublishedBlock(
        f"k6-{a}", a, 6,
        (f"t[{a},{a}]*t[{a},{a}+6] - t[{a},{a}+6]*t[{a}+6,{a}+6]",
         f"t[{a}+3,{a}+6]*t[{a},{a}+3] - R{i}*t[{a},{a}]*t[{a},{a}+6] + S{i}*t[{a},{a}+2]*t[{a}+2,{a}+6]"
         f" - T{i}*t[{a},{a}+4]*t[{a}+4,{a}+6]"),
        "ideal", (f"R{i}", f"S{i}", f"T{i}")))

# high shifts: proportional condition by condition
_HIGH = [
    PublishedBlock("k7-generic", "l", 7,
                   ("(2*l+13)*t[l,l+3]*t[l+3,l+7] + (1-2*l)*t[l,l+4]*t[l+4,l+7]",), "proportional"),
    PublishedBlock("k7-(-2)", "-2", 7,
                   ("45*t[-2,0]*t[0,5] - 36*t[-2,1]*t[1,5] - 20*t[-2,2]*t[2,5]",), "proportional"),
    PublishedBlock("k7-(-4)", "-4", 7,
                   ("20*t[-4,-1]*t[-1,3] + 36*t[-4,0]*t[0,3] + 45*t[-4,1]*t[1,3]",), "proportional"),
    PublishedBlock("k8-generic", "l", 8, ("t[l,l+4]*t[l+4,l+8]",), "proportional"),
    PublishedBlock("k8-(-7)", "-7", 8, ("60*t[-7,-3]*t[-3,1] + t[-7,-4]*t[-4,1]",), "proportional"),
    PublishedBlock("k8-0", "0", 8, ("-60*t[0,4]*t[4,8] + t[0,5]*t[5,8]",), "proportional"),
    PublishedBlock("k8-(-4)", "-4", 8, ("4*t[-4,0]*t[0,4] - t[-4,1]*t[1,4]",), "proportional"),
]
for i in (1, 2):
    a = f"a{i}"
    _HIGH += [
        PublishedBlock(f"k8-{a}-2", f"{a}-2", 8,
                       (f"eta{i}*t[{a}-2,{a}]*t[{a},{a}+6] + theta{i}*t[{a}-2,{a}+2]*t[{a}+2,{a}+6]",),
                       "proportional"),
        PublishedBlock(f"k8-{a}", a, 8,
                       (f"mu{i}*t[{a},{a}+6]*t[{a}+6,{a}+8] + nu{i}*t[{a},{a}+4]*t[{a}+4,{a}+8]",),
                       "proportional"),
        PublishedBlock(f"k9-{a}", a, 9, (f"t[{a},{a}+6]*t[{a}+6,{a}+9]",), "proportional"),
        PublishedBlock(f"k9-{a}-3", f"{a}-3", 9, (f"t[{a}-3,{a}]*t[{a},{a}+6]",), "proportional"),
        PublishedBlock(f"k10-{a}", a, 10, (f"t[{a},{a}+6]*t[{a}+6,{a}+10]",), "proportional"),
        # the printed target of the first factor is truncated; read as a_i
        PublishedBlock(f"k10-{a}-4", f"{a}-4", 10, (f"t[{a}-4,{a}]*t[{a},{a}+6]",), "proportional",
                       note="first factor read as t[a_i-4,a_i]"),
    ]
_HIGH += [
    PublishedBlock("k9-(-8)", "-8", 9, ("t[-8,-4]*t[-4,1]",), "proportional"),
    PublishedBlock("k9-(-4)", "-4", 9, ("t[-4,0]*t[0,5] - t[-4,1]*t[1,5]",), "proportional"),
    PublishedBlock("k9-0", "0", 9, ("t[0,5]*t[5,9]",), "proportional"),
]

# the class-coefficient tables printed alongside the shift 7 and 8 proofs
COEFFICIENT_TABLES = [
    PublishedBlock("w7-(-2)", "-2", 7,
                   ("-9/4*t[-2,0]*t[0,5] + 9/5*t[-2,1]*t[1,5] + t[-2,2]*t[2,5]",), "proportional"),
    PublishedBlock("w7-(-4)", "-4", 7,
                   ("5/9*t[-4,-1]*t[-1,3] + t[-4,0]*t[0,3] + 5/4*t[-4,1]*t[1,3]",), "proportional"),
    PublishedBlock("w8-(-7)", "-7", 8, ("t[-3,1]*t[-7,-3] + 1/60*t[-4,1]*t[-7,-4]",), "proportional"),
    PublishedBlock("w8-0", "0", 8, ("t[4,8]*t[0,4] - 1/60*t[0,5]*t[5,8]",), "proportional"),
    PublishedBlock("w8-(-4)", "-4", 8, ("t[-4,0]*t[0,4] - 1/4*t[-4,1]*t[1,4]",), "proportional"),
]

PUBLISHED_BLOCKS: list[PublishedBlock] = _LOW + _MID + _HIGH

# blocks where no condition is claimed, as (label, weight, shift)
EXEMPT_BLOCKS = [
    ("k0 generic", "l", 0), ("k0 at 0", "0", 0), ("k0 at a1", "a1", 0),
    ("k1 generic", "l", 1), ("k1 at 1", "1", 1), ("k1 at -4", "-4", 1),
    ("k5 generic", "l", 5), ("k5 at -2", "-2", 5), ("k5 at 1", "1", 5), ("k5 at -3", "-3", 5),
    ("k6 generic", "l", 6), ("k6 at 0", "0", 6), ("k6 at -4", "-4", 6),
    ("k7 at 0", "0", 7), ("k7 at -6", "-6", 7),
    ("k8 at (-7-sqrt(39))/2", "-7/2-1/2*sqrt(39)", 8), ("k8 at (-7+sqrt(39))/2", "-7/2+1/2*sqrt(39)", 8),
    ("k9 generic", "l", 9), ("k9 at 1", "1", 9), ("k9 at -2", "-2", 9),
    ("k10 generic", "l", 10), ("k10 at 0", "0", 10), ("k10 at -4", "-4", 10),
]

# weights where the printed conditions of a shift differ from the generic ones
PRINTED_SINGULAR_WEIGHTS = {
    5: ("0", "-4"),
    6: ("a1", "a2"),
    7: ("0", "-2", "-4", "-6"),
    8: ("-7", "0", "-4", "a1", "a2", "a1-2", "a2-2", "-7/2-1/2*sqrt(39)", "-7/2+1/2*sqrt(39)"),
}


def published_block(block_id: str) -> PublishedBlock:
    for b in PUBLISHED_BLOCKS + COEFFICIENT_TABLES:
        if b.id == block_id:
            return b
    raise KeyError(block_id)


__all__ = ["PublishedBlock", "PUBLISHED_BLOCKS", "COEFFICIENT_TABLES", "EXEMPT_BLOCKS",
           "PRINTED_SINGULAR_WEIGHTS",
           "parse_condition", "published_block"]
