"""Shared hypothesis strategies and small builders."""

from fractions import Fraction

from hypothesis import strategies as st

from bezoutdl.dlpencil import Ansatz
from bezoutdl.exactalg import SPoly
from bezoutdl.genstruct import KroneckerSpec, random_spec
from bezoutdl.polymat import PolyMat

small_ints = st.integers(-3, 3)
rationals = st.fractions(min_value=-4, max_value=4, max_denominator=4)


def pm(rows, grade=None):
    """PolyMat from entries given as coefficient lists, lowest power first."""
    return PolyMat.from_entries(rows, grade)


def col(*entries, grade=None):
    return PolyMat.column_vector(list(entries), grade)


def v_of(*coeffs_low_first, k=None):
    return Ansatz.from_poly(SPoly(coeffs_low_first), k)


@st.composite
def spolys(draw, max_grade=5, coeff=small_ints):
    g = draw(st.integers(0, max_grade))
    cs = draw(st.lists(coeff, min_size=g + 1, max_size=g + 1))
    return SPoly(cs, g)


@st.composite
def polymats(draw, max_m=3, max_n=3, max_grade=2, min_grade=0, coeff=small_ints,
             density=0.7):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    g = draw(st.integers(min_grade, max_grade))
    mats = []
    for _ in range(g + 1):
        rows = []
        for _ in range(m):
            rows.append(tuple(
                Fraction(draw(coeff)) if draw(st.floats(0, 1)) < density else Fraction(0)
                for _ in range(n)
            ))
        mats.append(tuple(rows))
    return PolyMat(m, n, g, mats)


@st.composite
def specs(draw, max_m=3, max_n=3, ks=(2, 3)):
    seed = draw(st.integers(0, 2 ** 32))
    return random_spec(seed, max_m, max_n, ks)


def spec(m, n, k, r, finite=None, inf=(), right=(), left=(), seed=0):
    return KroneckerSpec(m, n, k, r, dict(finite or {}), list(inf), list(right), list(left), seed)
