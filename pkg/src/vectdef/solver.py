"""Exact linear algebra over Q(sqrt d)(l) and cohomology decompositions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cochains import (Cochain0, Cochain1, Cochain2, WeightMismatch,
                       ansatz_coboundaries, antisymmetric_monomials, coboundary0,
                       coboundary1)
from .jets import JetPoly
from .scalar import (ONE, ONE_P, ZERO, LambdaPoly, QuadExt, Scalar, find_roots,
                     lcm_poly, weight_text)


# ----------------------------------------------------------------- systems

@dataclass
class LinearSystem:
    matrix: list[list[Scalar]]
    rhs: list[Scalar]
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.labels) if self.labels else (len(self.matrix[0]) if self.matrix else 0)
        if not self.labels:
            self.labels = [f"x{j}" for j in range(n)]
        if len(self.rhs) != len(self.matrix):
            raise ValueError("rhs length differs from the number of rows")
        for row in self.matrix:
            if len(row) != len(self.labels):
                raise ValueError("ragged matrix")

    @property
    def ncols(self) -> int:
        return len(self.labels)


@dataclass
class Solution:
    status: str                      # "unique", "parametric" or "inconsistent"
    values: list[Scalar] | None      # particular solution, free unknowns set to zero
    nullspace: list[list[Scalar]]
    pivots: list[LambdaPoly]         # fraction-free pivots, in elimination order
    pivot_columns: list[int]
    certificate: list[Scalar] | None = None   # y with y.A = 0, y.b = 1 when inconsistent

    @property
    def consistent(self) -> bool:
        return self.status != "inconsistent"

    def singular_weights(self) -> list[QuadExt]:
        return pivot_roots(self.pivots)


def _row_to_polys(row: Sequence[Scalar]) -> list[LambdaPoly]:
    den = lcm_poly([c.den for c in row if c])
    out = []
    for c in row:
        if not c:
            out.append(LambdaPoly())
        elif c.den == den:
            out.append(c.num)
        else:
            out.append(c.num * den.exact_div(c.den))
    return out


def _echelon(rows: list[list[LambdaPoly]], ncols: int):
    """Fraction-free (Bareiss) row echelon form, in place.

    Returns (pivot positions, pivot values).  Pivot rows are chosen by lowest
    degree, then lowest index, so the result is deterministic.
    """
    m = len(rows)
    prev = ONE_P
    r = 0
    pivots, pcols = [], []
    for c in range(ncols):
        if r >= m:
            break
        best = None
        for i in range(r, m):
            e = rows[i][c]
            if e and (best is None or e.degree < rows[best][c].degree):
                best = i
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][c]
        prow = rows[r]
        for i in range(r + 1, m):
            row = rows[i]
            lead = row[c]
            for j in range(c + 1, len(row)):
                v = piv * row[j]
                if lead and prow[j]:
                    v = v - lead * prow[j]
                row[j] = v.exact_div(prev) if prev != ONE_P and v else v
            row[c] = LambdaPoly()
        prev = piv
        pivots.append(piv)
        pcols.append(c)
        r += 1
    return pcols, pivots


def solve_exact(sys: LinearSystem, want_certificate: bool = True) -> Solution:
    n = sys.ncols
    aug = [_row_to_polys(list(row) + [b]) for row, b in zip(sys.matrix, sys.rhs)]
    pcols, pivots = _echelon(aug, n + 1)
    if n in pcols:
        cert = None
        if want_certificate:
            cert = _certificate(sys)
        return Solution("inconsistent", None, [], pivots, pcols, cert)
    # back substitution over the fraction field
    values = [ZERO] * n
    rank = len(pcols)
    for r in range(rank - 1, -1, -1):
        c = pcols[r]
        row = aug[r]
        acc = Scalar(row[n])
        for j in range(c + 1, n):
            if row[j] and values[j]:
                acc = acc - Scalar(row[j]) * values[j]
        values[c] = acc / Scalar(row[c])
    free = [j for j in range(n) if j not in pcols]
    null = []
    for f in free:
        vec = [ZERO] * n
        vec[f] = ONE
        for r in range(rank - 1, -1, -1):
            c = pcols[r]
            row = aug[r]
            acc = ZERO
            for j in range(c + 1, n):
                if row[j] and vec[j]:
                    acc = acc - Scalar(row[j]) * vec[j]
            vec[c] = acc / Scalar(row[c])
        null.append(vec)
    return Solution("unique" if not free else "parametric", values, null, pivots, pcols)


def _certificate(sys: LinearSystem) -> list[Scalar]:
    m = len(sys.matrix)
    n = sys.ncols
    rows = [[sys.matrix[i][j] for i in range(m)] for j in range(n)]
    rows.append(list(sys.rhs))
    dual = LinearSystem(rows, [ZERO] * n + [ONE], [f"y{i}" for i in range(m)])
    sol = solve_exact(dual, want_certificate=False)
    if not sol.consistent:
        raise ArithmeticError("no dual certificate for an inconsistent system")
    return sol.values


def pivot_roots(pivots: Sequence[LambdaPoly]) -> list[QuadExt]:
    roots: set[QuadExt] = set()
    for p in pivots:
        if p.degree > 0:
            rs, _ = find_roots(p)
            roots.update(rs)
    return sorted(roots, key=lambda r: r.sort_key())


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    if not rows:
        return 0
    polys = [_row_to_polys(r) for r in rows]
    pcols, _ = _echelon(polys, len(rows[0]))
    return len(pcols)


# ------------------------------------------------------- decompositions

def cochain_vector(om: Cochain2) -> list[Scalar]:
    order = om.shift + 2
    return [om.body.coeff(m) for m in antisymmetric_monomials(order)]


def _check_antisymmetric(om: Cochain2):
    bad = [m for m in om.body.terms if sum(m) != om.shift + 2]
    if bad:
        raise ValueError(f"2-cochain has terms outside total order {om.shift + 2}: {bad[:3]}")
    if om.body.swap() != -om.body:
        raise ValueError("2-cochain is not antisymmetric")


@dataclass
class ClassDecomposition:
    weight: Scalar
    shift: int
    coords: dict[str, Scalar] | None
    witness: Cochain1 | None
    singular_weights: list[QuadExt]
    certificate: list[Scalar] | None = None
    kernel: list[Cochain1] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.coords is not None

    def reconstruct(self, basis: Sequence[tuple[str, Cochain2]]) -> Cochain2:
        total = coboundary1(self.witness)
        for key, om in basis:
            c = self.coords.get(key, ZERO)
            if c:
                total = total + om.scale(c)
        return total

    def to_json(self) -> dict:
        return {
            "block": [weight_text(self.weight), self.shift],
            "coords": None if self.coords is None else {k: v.to_text() for k, v in self.coords.items()},
            "witness": None if self.witness is None else self.witness.body.to_json(),
            "singularWeights": [r.to_text() for r in self.singular_weights],
            "certificate": None if self.certificate is None else [c.to_text() for c in self.certificate],
        }


def decompose(om: Cochain2, basis: Sequence[tuple[str, Cochain2]] = (),
              certificate: bool = True) -> ClassDecomposition:
    """Write ``om`` as sum coords * basis + coboundary1(witness).

    The witness ranges over the homogeneous ansatz sum_j alpha_j X^(k+1-j) f^(j);
    unknown components along 1-cocycles are set to zero.
    """
    for key, b in basis:
        if b.block() != om.block():
            raise WeightMismatch(f"basis element {key} lives on {b.block()}, input on {om.block()}")
    _check_antisymmetric(om)
    w, k = om.weight, om.shift
    cobs = ansatz_coboundaries(w, k)
    cols = [cochain_vector(c) for c in cobs] + [cochain_vector(b) for _, b in basis]
    nrows = len(cols[0])
    matrix = [[col[i] for col in cols] for i in range(nrows)]
    labels = [f"alpha{j}" for j in range(k + 2)] + [key for key, _ in basis]
    sol = solve_exact(LinearSystem(matrix, cochain_vector(om), labels), want_certificate=certificate)
    sing = sol.singular_weights()
    if not sol.consistent:
        return ClassDecomposition(w, k, None, None, sing, sol.certificate)
    alphas = sol.values[: k + 2]
    coords = {key: sol.values[k + 2 + i] for i, (key, _) in enumerate(basis)}
    witness = Cochain1.from_coeffs(w, k, alphas)
    kernel = [Cochain1.from_coeffs(w, k, v[: k + 2]) for v in sol.nullspace
              if any(v[: k + 2]) and not any(v[k + 2:])]
    return ClassDecomposition(w, k, coords, witness, sing, None, kernel)


def is_coboundary(om: Cochain2) -> bool:
    return decompose(om, certificate=False).ok


@dataclass
class TrivialityCheck:
    trivial: bool
    multiple: Scalar | None
    certificate: list[Scalar] | None


def one_cocycle_triviality(c: Cochain1) -> TrivialityCheck:
    """Is ``c`` a multiple of the coboundary of the constant operator f -> f^(k)?"""
    k = c.shift
    a = Cochain0(c.weight, k, JetPoly(0, {(k,): ONE}))
    d = coboundary0(a)
    monos = [(k + 1 - j, j) for j in range(k + 2)]
    extra = sorted(set(c.body.terms) - set(monos))
    monos += extra
    matrix = [[d.body.coeff(m)] for m in monos]
    rhs = [c.body.coeff(m) for m in monos]
    sol = solve_exact(LinearSystem(matrix, rhs, ["a"]))
    if sol.consistent:
        return TrivialityCheck(True, sol.values[0], None)
    return TrivialityCheck(False, None, sol.certificate)


def specializes_to_witness(dec: ClassDecomposition, om: Cochain2, basis, value) -> bool:
    """Check that the generic decomposition, evaluated at l = value, still decomposes ``om`` there."""
    w = dec.witness.specialize(value)
    total = coboundary1(w)
    for key, b in basis:
        c = dec.coords.get(key, ZERO)
        if c:
            total = total + b.specialize(value).scale(c.eval_at(value))
    return total.body == om.specialize(value).body
