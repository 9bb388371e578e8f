"""Dense exact linear algebra over Q.

Matrices are sequences of rows of Fractions. Elimination clears row
denominators and runs on the integer kernels in :mod:`bezoutdl.kernels`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from . import kernels

Matrix = tuple  # tuple of tuples of Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_matrix(rows, ncols: int | None = None) -> Matrix:
    out = tuple(tuple(Fraction(x) if not isinstance(x, Fraction) else x for x in r) for r in rows)
    if ncols is not None and any(len(r) != ncols for r in out):
        raise ValueError("ragged matrix")
    return out


def zeros(m: int, n: int) -> Matrix:
    return tuple((ZERO,) * n for _ in range(m))


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def shape(a: Sequence, ncols: int | None = None) -> tuple[int, int]:
    m = len(a)
    return m, (len(a[0]) if m else (ncols or 0))


def transpose(a: Sequence, ncols: int | None = None) -> Matrix:
    m, n = shape(a, ncols)
    return tuple(tuple(a[i][j] for i in range(m)) for j in range(n))


def matmul(a: Sequence, b: Sequence, inner: int | None = None, ncols: int | None = None) -> Matrix:
    m = len(a)
    k = len(b) if inner is None else inner
    n = len(b[0]) if len(b) else (ncols or 0)
    bt = [[b[t][j] for t in range(k)] for j in range(n)]
    out = []
    for i in range(m):
        ai = a[i]
        nz = [(t, ai[t]) for t in range(k) if ai[t]]
        out.append(tuple(sum((x * bt[j][t] for t, x in nz), ZERO) for j in range(n)))
    return tuple(out)


def add(a: Sequence, b: Sequence) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(a: Sequence, c) -> Matrix:
    c = Fraction(c)
    return tuple(tuple(c * x for x in r) for r in a)


def kron(a: Sequence, b: Sequence, b_cols: int | None = None) -> Matrix:
    ma, na = shape(a)
    mb, nb = shape(b, b_cols)
    return tuple(
        tuple(a[i][j] * b[p][q] for j in range(na) for q in range(nb))
        for i in range(ma) for p in range(mb)
    )


def hstack(blocks: Sequence[Sequence], nrows: int) -> Matrix:
    rows = [[] for _ in range(nrows)]
    for blk in blocks:
        for i in range(nrows):
            rows[i].extend(blk[i])
    return tuple(tuple(r) for r in rows)


def vstack(blocks: Sequence[Sequence]) -> Matrix:
    out = []
    for blk in blocks:
        out.extend(tuple(r) for r in blk)
    return tuple(out)


def submatrix(a: Sequence, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return tuple(tuple(a[i][j] for j in cols) for i in rows)


def column(a: Sequence, j: int) -> tuple:
    return tuple(r[j] for r in a)


def is_zero(a: Sequence) -> bool:
    return not any(x for r in a for x in r)


def _int_rows(a: Sequence) -> list[list[int]]:
    out = []
    for r in a:
        den = 1
        for x in r:
            d = x.denominator
            if d != 1:
                den = den * d // gcd(den, d)
        out.append([int(x * den) if den != 1 else int(x) for x in r])
    return out


def rank(a: Sequence, ncols: int | None = None) -> int:
    m, n = shape(a, ncols)
    if m == 0 or n == 0:
        return 0
    return kernels.rank(_int_rows(a), n)


def rref(a: Sequence, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    m, n = shape(a, ncols)
    if m == 0 or n == 0:
        return (), []
    rows, piv = kernels.echelon(_int_rows(a), n, True)
    out = []
    for r, c in zip(rows, piv):
        p = r[c]
        out.append(tuple(Fraction(x, p) for x in r))
    return tuple(out), piv


def nullspace(a: Sequence, ncols: int | None = None) -> list[tuple]:
    """Basis of the right null space, one vector per free column (ascending)."""
    m, n = shape(a, ncols)
    if m == 0:
        return [tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    r, piv = rref(a, n)
    pset = set(piv)
    basis = []
    for f in range(n):
        if f in pset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for row, c in zip(r, piv):
            v[c] = -row[f]
        basis.append(tuple(v))
    return basis


def left_nullspace(a: Sequence, ncols: int | None = None) -> list[tuple]:
    return nullspace(transpose(a, ncols), len(a))


def pivot_columns(a: Sequence, ncols: int | None = None) -> list[int]:
    m, n = shape(a, ncols)
    if m == 0 or n == 0:
        return []
    return kernels.echelon(_int_rows(a), n, False)[1]


def solve(a: Sequence, b: Sequence) -> Matrix:
    """Solve ``a @ x = b`` exactly; ``a`` must have full column rank and the
    system must be consistent."""
    m, n = shape(a)
    _, nb = shape(b)
    aug = [tuple(a[i]) + tuple(b[i]) for i in range(m)]
    r, piv = rref(aug, n + nb)
    if any(c >= n for c in piv):
        raise ValueError("inconsistent linear system")
    if len(piv) != n:
        raise ValueError("coefficient matrix is rank deficient")
    return tuple(tuple(r[i][n + j] for j in range(nb)) for i in range(n))


def inverse(a: Sequence) -> Matrix:
    n = len(a)
    return solve(a, identity(n))


def det(a: Sequence) -> Fraction:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return ONE
    den = 1
    rows = []
    for r in a:
        d = 1
        for x in r:
            if x.denominator != 1:
                d = d * x.denominator // gcd(d, x.denominator)
        den *= d
        rows.append([int(x * d) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if rows[i][k]), None)
            if sw is None:
                return ZERO
            rows[k], rows[sw] = rows[sw], rows[k]
            sign = -sign
        pk = rows[k][k]
        for i in range(k + 1, n):
            ri = rows[i]
            fi = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - fi * rows[k][j]) // prev
            ri[k] = 0
        prev = pk
    return Fraction(sign * rows[n - 1][n - 1], den)


def in_span(basis_cols: Sequence[Sequence], v: Sequence, dim: int) -> bool:
    """Whether vector ``v`` lies in the span of the given column vectors."""
    if not basis_cols:
        return not any(v)
    mat = transpose(basis_cols, dim) if basis_cols else ()
    r0 = rank(mat, len(basis_cols))
    aug = tuple(tuple(mat[i]) + (v[i],) for i in range(dim))
    return rank(aug, len(basis_cols) + 1) == r0


class SpanBuilder:
    """Incrementally grown row echelon basis over Q (integer rows).

    ``add`` reports whether a vector was independent of what was added
    before; it is the cheap path for greedy basis selection.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: dict[int, list[int]] = {}
        self._order: list[int] = []

    def __len__(self):
        return len(self._rows)

    def _reduce(self, v: list[int]) -> list[int]:
        for p in self._order:
            x = v[p]
            if not x:
                continue
            row = self._rows[p]
            a = row[p]
            g = gcd(a, x)
            sa, sx = a // g, x // g
            v = [sa * vi - sx * ri for vi, ri in zip(v, row)]
            c = kernels.row_content(v)
            if c > 1:
                v = [vi // c for vi in v]
        return v

    def contains(self, vec: Sequence) -> bool:
        v = self._reduce(_int_rows([vec])[0])
        return not any(v)

    def add(self, vec: Sequence) -> bool:
        v = self._reduce(_int_rows([vec])[0])
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            return False
        if v[lead] < 0:
            v = [-x for x in v]
        self._rows[lead] = v
        self._order.append(lead)
        self._order.sort()
        return True
