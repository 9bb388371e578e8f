import importlib
import os
import subprocess
import sys
from fractions import Fraction as Fr

import pytest
import sympy
from hypothesis import given, strategies as st

from bezoutdl import _kernels_py as pyk
from bezoutdl import kernels
from bezoutdl import linalg as la

try:
    cyk = importlib.import_module("bezoutdl._kernels")
except ImportError:
    cyk = None

needs_cython = pytest.mark.skipif(cyk is None, reason="compiled kernels not built")

int_rows = st.integers(1, 6).flatmap(lambda n: st.lists(
    st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=1, max_size=6))
int_polys = st.lists(st.integers(-9, 9), min_size=1, max_size=7)


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_env_forces_fallback():
    env = {**os.environ, "BEZOUTDL_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", "import bezoutdl; print(bezoutdl.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@given(int_rows)
def test_rank_matches_sympy(rows):
    n = len(rows[0])
    assert pyk.rank(rows, n) == sympy.Matrix(rows).rank()


@given(int_polys, int_polys)
def test_pdivrem_identity(a, b):
    if not any(b):
        return
    s, q, r = pyk.poly_pdivrem(a, b)
    lhs = pyk.poly_scale(a, s)
    rhs = pyk.poly_add(pyk.poly_mul(q, b), r)
    assert pyk.poly_trim(lhs) == pyk.poly_trim(rhs)
    assert len(pyk.poly_trim(r)) < len(pyk.poly_trim(b))


@needs_cython
@given(int_rows)
def test_echelon_backends_agree(rows):
    n = len(rows[0])
    assert pyk.echelon(rows, n) == cyk.echelon(rows, n)
    assert pyk.echelon(rows, n, False) == cyk.echelon(rows, n, False)


@needs_cython
@given(int_polys, int_polys, st.integers(-5, 5))
def test_poly_backends_agree(a, b, s):
    assert pyk.poly_mul(a, b) == cyk.poly_mul(a, b)
    assert pyk.poly_add(a, b) == cyk.poly_add(a, b)
    assert pyk.poly_scale(a, s) == cyk.poly_scale(a, s)
    assert pyk.poly_content(a) == cyk.poly_content(a)
    if any(b):
        assert pyk.poly_pdivrem(a, b) == cyk.poly_pdivrem(a, b)
    x, y = [a, b], [b, a]
    assert pyk.row_combine(x, s, b, y) == cyk.row_combine(x, s, b, y)
    assert pyk.rows_content(x) == cyk.rows_content(x)


# rational linear algebra on top of the kernels

rat_mats = st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.fractions(-5, 5, max_denominator=3), min_size=n, max_size=n),
    min_size=1, max_size=5))


@given(rat_mats)
def test_nullspace_is_kernel(rows):
    n = len(rows[0])
    A = la.as_matrix(rows, n)
    ker = la.nullspace(A, n)
    assert len(ker) == n - la.rank(A, n)
    for v in ker:
        assert all(sum(a * x for a, x in zip(r, v)) == 0 for r in A)


@given(rat_mats)
def test_det_and_inverse(rows):
    n = len(rows[0])
    sq = [list(r) + [Fr(0)] * max(0, len(rows) - n) for r in rows][:n]
    while len(sq) < n:
        sq.append([Fr(int(i == len(sq))) for i in range(n)])
    sq = [r[:n] for r in sq]
    A = la.as_matrix(sq, n)
    d = la.det(A)
    assert d == sympy.Rational(sympy.Matrix(sq).det())
    if d:
        assert la.matmul(A, la.inverse(A), n) == la.identity(n)


@given(rat_mats, st.lists(st.fractions(-3, 3, max_denominator=2), min_size=5, max_size=5))
def test_span_builder_matches_rank(rows, extra):
    n = len(rows[0])
    sb = la.SpanBuilder(n)
    added = sum(sb.add(tuple(r)) for r in rows)
    assert added == la.rank(la.as_matrix(rows, n), n) == len(sb)
    v = tuple(extra[:n])
    assert sb.contains(v) == la.in_span([tuple(r) for r in rows], v, n)
