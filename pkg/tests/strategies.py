"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from vectdef.catalog import families_at
from vectdef.cochains import Cochain0, Cochain1
from vectdef.jets import JetPoly
from vectdef.scalar import LAMBDA, Scalar

small = st.fractions(min_value=-6, max_value=6, max_denominator=5)
weights = st.one_of(st.just(LAMBDA), small.map(Scalar.coerce),
                    st.sampled_from([Scalar(0), Scalar(-4), LAMBDA + Fraction(1, 2)]))


@st.composite
def cochains1(draw, max_shift=8):
    k = draw(st.integers(0, max_shift))
    w = draw(weights)
    terms = draw(st.dictionaries(st.tuples(st.integers(0, k + 2), st.integers(0, k + 1)),
                                 small.filter(bool), min_size=1, max_size=4))
    return Cochain1(w, k, JetPoly(1, {m: Scalar.coerce(c) for m, c in terms.items()}))


@st.composite
def cochains0(draw, max_shift=8):
    k = draw(st.integers(0, max_shift))
    w = draw(weights)
    terms = draw(st.dictionaries(st.tuples(st.integers(0, k + 1)), small.filter(bool),
                                 min_size=1, max_size=3))
    return Cochain0(w, k, JetPoly(0, {m: Scalar.coerce(c) for m, c in terms.items()}))


# composable pairs of basic 1-cocycles: (outer source offset, outer shift, inner shift)
_GENERIC_SHIFTS = (0, 2, 3, 4)


@st.composite
def composable_cocycles(draw):
    """(outer, inner) with outer starting where inner ends."""
    special = draw(st.booleans())
    if special:
        w, k_in = draw(st.sampled_from([(Scalar(0), 1), (Scalar(0), 5), (Scalar(-4), 5), (Scalar(0), 0)]))
    else:
        w = draw(weights)
        k_in = draw(st.sampled_from(_GENERIC_SHIFTS))
    inner_choices = families_at(w, k_in)
    _, inner = draw(st.sampled_from(inner_choices))
    tgt = inner.target
    outer_shifts = [k for k in range(0, 7) if families_at(tgt, k)]
    k_out = draw(st.sampled_from(outer_shifts))
    _, outer = draw(st.sampled_from(families_at(tgt, k_out)))
    return outer, inner


__all__ = ["small", "weights", "cochains0", "cochains1", "composable_cocycles"]
