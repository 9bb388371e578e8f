"""Dense matrix polynomials of explicit grade.

``PolyMat.coeffs[i]`` is the ``m x n`` coefficient of ``z**i``; there are
always ``grade + 1`` of them and the top one may vanish.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from . import linalg as la
from .exactalg import NEG_INF, SPoly, rat

ZERO = Fraction(0)


class PolyMat:
    __slots__ = ("m", "n", "grade", "coeffs")

    def __init__(self, m: int, n: int, grade: int, coeffs: Iterable):
        cs = tuple(la.as_matrix(c, n) if len(c) else ((),) * 0 for c in coeffs)
        if m < 0 or n < 0 or grade < 0:
            raise ValueError("dimensions and grade must be non-negative")
        if len(cs) != grade + 1:
            raise ValueError(f"expected {grade + 1} coefficient matrices, got {len(cs)}")
        for c in cs:
            if len(c) != m or any(len(r) != n for r in c):
                raise ValueError("coefficient matrix has the wrong shape")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "grade", grade)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMat is immutable")

    # construction
    @classmethod
    def zero(cls, m: int, n: int, grade: int = 0) -> "PolyMat":
        return cls(m, n, grade, [la.zeros(m, n)] * (grade + 1))

    @classmethod
    def constant(cls, mat: Sequence, grade: int = 0, ncols: int | None = None) -> "PolyMat":
        mat = la.as_matrix(mat)
        m, n = la.shape(mat, ncols)
        return cls(m, n, grade, [mat] + [la.zeros(m, n)] * grade)

    @classmethod
    def identity(cls, n: int, grade: int = 0) -> "PolyMat":
        return cls.constant(la.identity(n), grade)

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence], grade: int | None = None,
                     ncols: int | None = None) -> "PolyMat":
        """Build from a 2-D array of SPoly / coefficient lists (lowest power
        first) / scalars."""
        polys = [[_entry_poly(e) for e in row] for row in entries]
        m = len(polys)
        n = len(polys[0]) if m else (ncols or 0)
        deg = max((p.degree for row in polys for p in row), default=NEG_INF)
        if grade is None:
            grade = 0 if deg == NEG_INF else deg
        if deg != NEG_INF and deg > grade:
            raise ValueError("entry degree exceeds grade")
        coeffs = []
        for d in range(grade + 1):
            coeffs.append(tuple(
                tuple(p.coeffs[d] if d < len(p.coeffs) else ZERO for p in row) for row in polys
            ))
        return cls(m, n, grade, coeffs)

    @classmethod
    def column_vector(cls, entries: Sequence, grade: int | None = None) -> "PolyMat":
        return cls.from_entries([[e] for e in entries], grade, 1)

    # structure
    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    def entry(self, i: int, j: int) -> SPoly:
        return SPoly([c[i][j] for c in self.coeffs], self.grade)

    def entries(self) -> list[list[SPoly]]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.m)]

    @property
    def degree(self):
        for d in range(self.grade, -1, -1):
            if not la.is_zero(self.coeffs[d]):
                return d
        return NEG_INF

    def is_zero(self) -> bool:
        return self.degree == NEG_INF

    def column_degrees(self) -> list:
        out = []
        for j in range(self.n):
            deg = NEG_INF
            for d in range(self.grade, -1, -1):
                if any(self.coeffs[d][i][j] for i in range(self.m)):
                    deg = d
                    break
            out.append(deg)
        return out

    def column(self, j: int) -> "PolyMat":
        return self.select_columns([j])

    def select_columns(self, cols: Sequence[int]) -> "PolyMat":
        return PolyMat(self.m, len(cols), self.grade,
                       [tuple(tuple(r[j] for j in cols) for r in c) for c in self.coeffs])

    def select_rows(self, rows: Sequence[int]) -> "PolyMat":
        return PolyMat(len(rows), self.n, self.grade,
                       [tuple(c[i] for i in rows) for c in self.coeffs])

    def block(self, bi: int, bj: int, bm: int, bn: int) -> "PolyMat":
        return self.select_rows(range(bi * bm, (bi + 1) * bm)).select_columns(
            range(bj * bn, (bj + 1) * bn))

    def regrade(self, grade: int) -> "PolyMat":
        d = self.degree
        if d != NEG_INF and grade < d:
            raise ValueError(f"grade {grade} below degree {d}")
        cs = list(self.coeffs[: grade + 1])
        cs += [la.zeros(self.m, self.n)] * (grade + 1 - len(cs))
        return PolyMat(self.m, self.n, grade, cs)

    def trimmed(self) -> "PolyMat":
        d = self.degree
        return self.regrade(0 if d == NEG_INF else d)

    def transpose(self) -> "PolyMat":
        return PolyMat(self.n, self.m, self.grade, [la.transpose(c, self.n) for c in self.coeffs])

    @property
    def T(self) -> "PolyMat":
        return self.transpose()

    # evaluation and calculus
    def __call__(self, lam) -> la.Matrix:
        return eval_at(self, lam)

    def derivative(self, order: int = 1, normalized: bool = False) -> "PolyMat":
        return matpoly_derivative(self, order, normalized)

    def taylor(self, lam) -> list[la.Matrix]:
        """Coefficients of ``P`` in powers of ``(z - lam)``."""
        lam = rat(lam)
        out = []
        for j in range(self.grade + 1):
            acc = [[ZERO] * self.n for _ in range(self.m)]
            for i in range(j, self.grade + 1):
                f = comb(i, j) * lam ** (i - j)
                if not f:
                    continue
                c = self.coeffs[i]
                for r in range(self.m):
                    row = acc[r]
                    cr = c[r]
                    for s in range(self.n):
                        if cr[s]:
                            row[s] += f * cr[s]
            out.append(tuple(tuple(r) for r in acc))
        return out

    # arithmetic
    def __add__(self, other: "PolyMat") -> "PolyMat":
        _check_same_shape(self, other)
        g = max(self.grade, other.grade)
        a, b = self.regrade(g), other.regrade(g)
        return PolyMat(self.m, self.n, g, [la.add(x, y) for x, y in zip(a.coeffs, b.coeffs)])

    def __sub__(self, other: "PolyMat") -> "PolyMat":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "PolyMat":
        if isinstance(c, SPoly):
            return self.spoly_scale(c)
        return PolyMat(self.m, self.n, self.grade, [la.scale(x, c) for x in self.coeffs])

    def spoly_scale(self, p: SPoly) -> "PolyMat":
        g = self.grade + p.grade
        out = [[[ZERO] * self.n for _ in range(self.m)] for _ in range(g + 1)]
        for i, c in enumerate(self.coeffs):
            for d, a in enumerate(p.coeffs):
                if not a:
                    continue
                tgt = out[i + d]
                for r in range(self.m):
                    for s in range(self.n):
                        if c[r][s]:
                            tgt[r][s] += a * c[r][s]
        return PolyMat(self.m, self.n, g, out)

    def __matmul__(self, other: "PolyMat") -> "PolyMat":
        if self.n != other.m:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        g = self.grade + other.grade
        m, n, k = self.m, other.n, self.n
        out = [[[ZERO] * n for _ in range(m)] for _ in range(g + 1)]
        bcols = [[[c[t][j] for t in range(k)] for j in range(n)] for c in other.coeffs]
        for i, a in enumerate(self.coeffs):
            if la.is_zero(a):
                continue
            for d, bt in enumerate(bcols):
                tgt = out[i + d]
                for r in range(m):
                    ar = a[r]
                    nz = [(t, x) for t, x in enumerate(ar) if x]
                    if not nz:
                        continue
                    row = tgt[r]
                    for j in range(n):
                        col = bt[j]
                        s = ZERO
                        for t, x in nz:
                            y = col[t]
                            if y:
                                s += x * y
                        if s:
                            row[j] += s
        return PolyMat(m, n, g, out)

    def __eq__(self, other):
        if not isinstance(other, PolyMat):
            return NotImplemented
        return (self.m, self.n, self.grade, self.coeffs) == (other.m, other.n, other.grade, other.coeffs)

    def equal_as_polynomial(self, other: "PolyMat") -> bool:
        """Equality of the underlying polynomials, ignoring declared grade."""
        if self.shape != other.shape:
            return False
        g = max(self.grade, other.grade)
        return self.regrade_free(g).coeffs == other.regrade_free(g).coeffs

    def regrade_free(self, g: int) -> "PolyMat":
        cs = list(self.coeffs) + [la.zeros(self.m, self.n)] * max(g + 1 - len(self.coeffs), 0)
        return PolyMat(self.m, self.n, g, cs[: g + 1]) if g + 1 >= len(self.coeffs) or \
            all(la.is_zero(c) for c in cs[g + 1:]) else self

    def __hash__(self):
        return hash((self.m, self.n, self.grade, self.coeffs))

    def __repr__(self):
        return f"PolyMat({self.m}x{self.n}, grade={self.grade}, {self.pretty()})"

    def pretty(self) -> str:
        return "[" + "; ".join(", ".join(str(e) for e in row) for row in self.entries()) + "]"

    # serialization
    def to_json(self) -> dict:
        return {
            "m": self.m, "n": self.n, "grade": self.grade,
            "coeffs": [[[str(x) for x in r] for r in c] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PolyMat":
        return polymat_from_json(data)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _check_same_shape(a: PolyMat, b: PolyMat):
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def _entry_poly(e) -> SPoly:
    if isinstance(e, SPoly):
        return e
    if isinstance(e, (list, tuple)):
        return SPoly(e)
    return SPoly.const(e)


class PolyMatFormatError(ValueError):
    """Malformed PolyMat JSON."""


def polymat_from_json(data) -> PolyMat:
    if not isinstance(data, dict):
        raise PolyMatFormatError("PolyMat JSON must be an object")
    for key in ("m", "n", "grade", "coeffs"):
        if key not in data:
            raise PolyMatFormatError(f"missing field {key!r}")
    m, n, grade = data["m"], data["n"], data["grade"]
    for name, val in (("m", m), ("n", n), ("grade", grade)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            raise PolyMatFormatError(f"field {name!r} must be a non-negative integer")
    cs = data["coeffs"]
    if not isinstance(cs, list) or len(cs) != grade + 1:
        raise PolyMatFormatError(f"'coeffs' must list grade+1 = {grade + 1} matrices")
    mats = []
    for d, c in enumerate(cs):
        if not isinstance(c, list) or len(c) != m:
            raise PolyMatFormatError(f"coeffs[{d}] must have {m} rows")
        rows = []
        for i, r in enumerate(c):
            if not isinstance(r, list) or len(r) != n:
                raise PolyMatFormatError(f"coeffs[{d}][{i}] must have {n} entries")
            try:
                rows.append(tuple(_parse_rat(x) for x in r))
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise PolyMatFormatError(f"coeffs[{d}][{i}]: {exc}") from None
        mats.append(tuple(rows))
    return PolyMat(m, n, grade, mats)


def _parse_rat(x) -> Fraction:
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"rationals must be 'p/q' strings, got {x!r}")


# free functions mirroring the operation list

def eval_at(P: PolyMat, lam) -> la.Matrix:
    lam = rat(lam)
    acc = [list(r) for r in P.coeffs[P.grade]]
    for d in range(P.grade - 1, -1, -1):
        c = P.coeffs[d]
        for i in range(P.m):
            row = acc[i]
            ci = c[i]
            for j in range(P.n):
                row[j] = row[j] * lam + ci[j]
    return tuple(tuple(r) for r in acc)


def matpoly_derivative(P: PolyMat, order: int = 1, normalized: bool = False) -> PolyMat:
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    g = max(P.grade - order, 0)
    out = []
    for i in range(order, P.grade + 1):
        f = Fraction(math.perm(i, order))
        if normalized:
            f /= math.factorial(order)
        out.append(la.scale(P.coeffs[i], f))
    out += [la.zeros(P.m, P.n)] * (g + 1 - len(out))
    return PolyMat(P.m, P.n, g, out)


def reversal(P: PolyMat, wrt_grade: int | None = None) -> PolyMat:
    k = P.grade if wrt_grade is None else wrt_grade
    d = P.degree
    if d != NEG_INF and k < d:
        raise ValueError(f"reversal grade {k} below degree {d}")
    Q = P.regrade_free(k) if k >= P.grade else P.regrade(k)
    return PolyMat(P.m, P.n, k, list(reversed(Q.coeffs)))


def kron(A: PolyMat, B: PolyMat) -> PolyMat:
    g = A.grade + B.grade
    m, n = A.m * B.m, A.n * B.n
    out = [la.zeros(m, n) for _ in range(g + 1)]
    out = [[list(r) for r in o] for o in out]
    for i, a in enumerate(A.coeffs):
        if la.is_zero(a):
            continue
        for d, b in enumerate(B.coeffs):
            if la.is_zero(b):
                continue
            kk = la.kron(a, b, B.n)
            tgt = out[i + d]
            for r in range(m):
                for s in range(n):
                    if kk[r][s]:
                        tgt[r][s] += kk[r][s]
    return PolyMat(m, n, g, out)


def vandermonde_vector(k: int) -> PolyMat:
    """``V(z) = [z^(k-1), ..., z, 1]^T`` of grade ``k - 1``."""
    coeffs = []
    for d in range(k):
        coeffs.append(tuple((Fraction(int(i == k - 1 - d)),) for i in range(k)))
    return PolyMat(k, 1, k - 1, coeffs)


def vandermonde_at(k: int, mu, order: int = 0, normalized: bool = False) -> tuple:
    """``V^(order)(mu)`` as a tuple of length ``k``."""
    mu = rat(mu)
    out = []
    for i in range(k):
        p = k - 1 - i
        if p < order:
            out.append(Fraction(0))
        else:
            f = Fraction(math.perm(p, order))
            if normalized:
                f /= math.factorial(order)
            out.append(f * mu ** (p - order))
    return tuple(out)


def probe_points(count: int) -> list[Fraction]:
    """Deterministic distinct rationals 0, 1, -1, 2, -2, ..."""
    pts = [Fraction(0)]
    i = 1
    while len(pts) < count:
        pts.append(Fraction(i))
        if len(pts) < count:
            pts.append(Fraction(-i))
        i += 1
    return pts[:count]


def normal_rank(P: PolyMat) -> int:
    """Rank over Q(z), by exact evaluation at ``grade*min(m,n) + 1`` points."""
    cap = min(P.m, P.n)
    if cap == 0 or P.is_zero():
        return 0
    best = 0
    for lam in probe_points(P.grade * cap + 1):
        best = max(best, la.rank(eval_at(P, lam), P.n))
        if best == cap:
            break
    return best


def high_order_coefficient(A: PolyMat) -> la.Matrix:
    """Matrix of leading coefficient vectors of the columns of ``A``."""
    degs = A.column_degrees()
    if any(d == NEG_INF for d in degs):
        raise ValueError("high-order coefficient matrix undefined for a zero column")
    return tuple(tuple(A.coeffs[degs[j]][i][j] for j in range(A.n)) for i in range(A.m))


def hstack(mats: Sequence[PolyMat]) -> PolyMat:
    mats = [M for M in mats]
    if not mats:
        raise ValueError("nothing to stack")
    m = mats[0].m
    g = max(M.grade for M in mats)
    mats = [M.regrade_free(g) for M in mats]
    n = sum(M.n for M in mats)
    coeffs = []
    for d in range(g + 1):
        coeffs.append(tuple(
            tuple(x for M in mats for x in M.coeffs[d][i]) for i in range(m)
        ))
    return PolyMat(m, n, g, coeffs)


def vstack(mats: Sequence[PolyMat]) -> PolyMat:
    return hstack([M.transpose() for M in mats]).transpose()


def block_diag(mats: Sequence[PolyMat]) -> PolyMat:
    g = max(M.grade for M in mats)
    m = sum(M.m for M in mats)
    n = sum(M.n for M in mats)
    out = [[[ZERO] * n for _ in range(m)] for _ in range(g + 1)]
    r0 = c0 = 0
    for M in mats:
        for d in range(M.grade + 1):
            for i in range(M.m):
                for j in range(M.n):
                    out[d][r0 + i][c0 + j] = M.coeffs[d][i][j]
        r0 += M.m
        c0 += M.n
    return PolyMat(m, n, g, out)


# block matrix <-> bivariate polynomial

class BivariateMat:
    """``F(x, y) = sum_{i,j} y^i x^j F_{ij}``; ``coeffs[i][j]`` is the
    coefficient of ``y^i x^j``."""

    __slots__ = ("m", "n", "grade_x", "grade_y", "coeffs")

    def __init__(self, m: int, n: int, grade_x: int, grade_y: int, coeffs):
        cs = tuple(tuple(la.as_matrix(c, n) for c in row) for row in coeffs)
        if len(cs) != grade_y + 1 or any(len(row) != grade_x + 1 for row in cs):
            raise ValueError("coefficient grid does not match grades")
        for row in cs:
            for c in row:
                if len(c) != m or any(len(r) != n for r in c):
                    raise ValueError("coefficient block has the wrong shape")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "grade_x", grade_x)
        object.__setattr__(self, "grade_y", grade_y)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("BivariateMat is immutable")

    def __eq__(self, other):
        if not isinstance(other, BivariateMat):
            return NotImplemented
        return (self.m, self.n, self.grade_x, self.grade_y, self.coeffs) == \
            (other.m, other.n, other.grade_x, other.grade_y, other.coeffs)

    def __hash__(self):
        return hash((self.m, self.n, self.grade_x, self.grade_y, self.coeffs))

    def swapped(self) -> "BivariateMat":
        """``F(y, x)``."""
        return BivariateMat(self.m, self.n, self.grade_y, self.grade_x,
                            [[self.coeffs[i][j] for i in range(self.grade_y + 1)]
                             for j in range(self.grade_x + 1)])

    def evaluate(self, x, y) -> la.Matrix:
        x, y = rat(x), rat(y)
        acc = la.zeros(self.m, self.n)
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                acc = la.add(acc, la.scale(c, y ** i * x ** j))
        return acc


def block_to_bivariate(B: Sequence, k: int, ncols: int | None = None) -> BivariateMat:
    rows, cols = la.shape(B, ncols)
    if k <= 0 or rows % k or cols % k:
        raise ValueError(f"a {rows}x{cols} matrix does not split into {k}x{k} blocks")
    m, n = rows // k, cols // k
    grid = []
    for i in range(k):  # power of y
        row = []
        for j in range(k):  # power of x
            bi, bj = k - 1 - i, k - 1 - j
            row.append(tuple(tuple(B[bi * m + r][bj * n + s] for s in range(n)) for r in range(m)))
        grid.append(row)
    return BivariateMat(m, n, k - 1, k - 1, grid)


def bivariate_to_block(F: BivariateMat) -> la.Matrix:
    if F.grade_x != F.grade_y:
        raise ValueError("block form needs equal grades in x and y")
    k = F.grade_x + 1
    m, n = F.m, F.n
    out = [[ZERO] * (k * n) for _ in range(k * m)]
    for i in range(k):
        for j in range(k):
            c = F.coeffs[i][j]
            bi, bj = k - 1 - i, k - 1 - j
            for r in range(m):
                for s in range(n):
                    out[bi * m + r][bj * n + s] = c[r][s]
    return tuple(tuple(r) for r in out)
