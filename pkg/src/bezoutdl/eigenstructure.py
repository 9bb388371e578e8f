"""Smith form, partial multiplicities, minimal bases and the index sum.

Elimination runs on integer coefficient lists (lowest power first): every
row or column operation is a pseudo-division step followed by content
normalization, so coefficient growth stays tame and no Fractions appear in
the inner loops.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from . import kernels
from . import linalg as la
from .exactalg import NEG_INF, SPoly, rat, rational_roots, spoly_gcd
from .polymat import (PolyMat, eval_at, high_order_coefficient, normal_rank,
                      probe_points, reversal)


class IndexSumViolation(AssertionError):
    """The index sum identity failed; always a bug, never bad input."""


class IrrationalEigenvaluesPresent(UserWarning):
    """Part of the finite spectrum is not rational and was left unresolved."""


class MinimalBasisError(AssertionError):
    """A constructed basis failed the Forney criterion."""


# bookkeeping for the global "index sum holds everywhere" audit
INDEX_SUM_AUDIT = {"checked": 0, "failed": 0}


# ---------------------------------------------------------------- helpers

def _int_poly_rows(P: PolyMat) -> list[list[list[int]]]:
    """Rows of ``P`` as integer polynomials, each row scaled to clear
    denominators. Returns the rows and the per-row scale used."""
    rows, scales = [], []
    for i in range(P.m):
        den = 1
        for c in P.coeffs:
            for x in c[i]:
                d = x.denominator
                if d != 1:
                    den = den * d // gcd(den, d)
        row = []
        for j in range(P.n):
            row.append(kernels.poly_trim([int(c[i][j] * den) for c in P.coeffs]))
        rows.append(row)
        scales.append(den)
    return rows, scales


def _deg(p: list) -> int:
    return len(p) - 1


def _spoly_from_ints(p: list[int], scale=1) -> SPoly:
    return SPoly([Fraction(x) * scale for x in p]) if p else SPoly.zero()


class _Tracked:
    """Rows of integer polynomials with a rational scale per row; the true
    row is ``scale * ints``. Used for the unimodular multipliers."""

    def __init__(self, size: int):
        self.ints = [[[1] if i == j else [] for j in range(size)] for i in range(size)]
        self.scale = [Fraction(1)] * size

    def swap(self, i, j):
        self.ints[i], self.ints[j] = self.ints[j], self.ints[i]
        self.scale[i], self.scale[j] = self.scale[j], self.scale[i]

    def combine(self, i, s, q, t):
        """row_i <- s*row_i - q*row_t (true rows)."""
        a, b = self.scale[i], self.scale[t]
        left = [kernels.poly_scale(p, s * a.numerator * b.denominator) for p in self.ints[i]]
        right = [kernels.poly_mul(q, kernels.poly_scale(p, b.numerator * a.denominator))
                 for p in self.ints[t]]
        new = [kernels.poly_add(x, kernels.poly_scale(y, -1)) for x, y in zip(left, right)]
        scale = Fraction(1, a.denominator * b.denominator)
        c = kernels.rows_content(new)
        if c > 1:
            new = [[x // c for x in p] for p in new]
            scale *= c
        self.ints[i] = new
        self.scale[i] = scale

    def divide(self, i, c):
        self.scale[i] /= c

    def to_polymat(self, transpose: bool = False) -> PolyMat:
        size = len(self.ints)
        ents = [[_spoly_from_ints(p, self.scale[i]) for p in row] for i, row in enumerate(self.ints)]
        M = PolyMat.from_entries(ents, ncols=size)
        return M.transpose() if transpose else M


@dataclass(frozen=True)
class SmithForm:
    invariant_factors: tuple
    rank: int
    U: PolyMat | None = None
    V: PolyMat | None = None

    def diagonal(self, m: int, n: int) -> PolyMat:
        ents = [[SPoly.zero() for _ in range(n)] for _ in range(m)]
        for i, d in enumerate(self.invariant_factors):
            ents[i][i] = d
        return PolyMat.from_entries(ents, ncols=n)


def smith_form(P: PolyMat, track: bool = False) -> SmithForm:
    """Smith canonical form by Euclidean elimination over Q[z].

    With ``track`` the unimodular ``U``, ``V`` with ``U P V = diag`` are
    returned as well (slower).
    """
    if not track:
        facs = _invariant_factors_cached(P)
        return SmithForm(facs, len(facs))
    return _smith(P, True)


@lru_cache(maxsize=512)
def _invariant_factors_cached(P: PolyMat) -> tuple:
    return _smith(P, False).invariant_factors


def _smith(P: PolyMat, track: bool) -> SmithForm:
    m, n = P.m, P.n
    A, scales = _int_poly_rows(P)
    U = V = None
    if track:
        U = _Tracked(m)
        for i, s in enumerate(scales):
            U.scale[i] = Fraction(s)
        V = _Tracked(n)  # stored as rows = columns of V

    def row_op(i, s, q, t):
        A[i] = kernels.row_combine(A[i], s, q, A[t])
        if U:
            U.combine(i, s, q, t)
        c = kernels.rows_content(A[i])
        if c > 1:
            A[i] = [[x // c for x in p] for p in A[i]]
            if U:
                U.divide(i, c)

    def col_op(j, s, q, t):
        col_j = [A[x][j] for x in range(m)]
        col_t = [A[x][t] for x in range(m)]
        new = kernels.row_combine(col_j, s, q, col_t)
        if V:
            V.combine(j, s, q, t)
        c = kernels.rows_content(new)
        if c > 1:
            new = [[x // c for x in p] for p in new]
            if V:
                V.divide(j, c)
        for x in range(m):
            A[x][j] = new[x]

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            if U:
                U.swap(i, j)

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            if V:
                V.swap(i, j)

    def key(p, i, j):
        return (len(p), abs(p[-1]), i, j)

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                p = A[i][j]
                if p and (best is None or key(p, i, j) < best):
                    best = key(p, i, j)
        if best is None:
            break
        swap_rows(t, best[2])
        swap_cols(t, best[3])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    s, q, r = kernels.poly_pdivrem(A[i][t], A[t][t])
                    row_op(i, s, q, t)
                    dirty = dirty or bool(r)
            for j in range(t + 1, n):
                if A[t][j]:
                    s, q, r = kernels.poly_pdivrem(A[t][j], A[t][t])
                    col_op(j, s, q, t)
                    dirty = dirty or bool(r)
            if dirty:
                cand = [(key(A[i][t], i, t)) for i in range(t, m) if A[i][t]]
                cand += [(key(A[t][j], t, j)) for j in range(t + 1, n) if A[t][j]]
                _, _, bi, bj = min(cand)
                swap_rows(t, bi)
                swap_cols(t, bj)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] and kernels.poly_pdivrem(A[i][j], A[t][t])[2]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # pull the offending row into the pivot row (unimodular)
            A[t] = [kernels.poly_add(x, y) for x, y in zip(A[t], A[bad])]
            if U:
                U.combine(t, 1, [-1], bad)
        piv = A[t][t]
        lead = piv[-1]
        diag.append(_spoly_from_ints(piv, Fraction(1, lead)))
        if U:
            U.divide(t, lead)
        t += 1
    if not track:
        return SmithForm(tuple(diag), len(diag))
    return SmithForm(tuple(diag), len(diag), U.to_polymat(), V.to_polymat(transpose=True))


# -------------------------------------------------------------- oracles

def _newton_to_monomial(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> SPoly:
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    # Horner on the Newton form
    acc = [coef[-1]]
    for i in range(n - 2, -1, -1):
        nxt = [Fraction(0)] * (len(acc) + 1)
        for d, a in enumerate(acc):
            nxt[d + 1] += a
            nxt[d] -= xs[i] * a
        nxt[0] += coef[i]
        acc = nxt
    poly[: len(acc)] = acc[:n]
    return SPoly(poly)


def det_poly(A: PolyMat) -> SPoly:
    """Determinant of a square matrix polynomial by evaluation and
    interpolation at ``sum(column degrees) + 1`` points."""
    if A.m != A.n:
        raise ValueError("determinant needs a square matrix")
    if A.n == 0:
        return SPoly.const(1)
    degs = A.column_degrees()
    if any(d == NEG_INF for d in degs):
        return SPoly.zero()
    bound = sum(degs)
    xs = probe_points(bound + 1)
    ys = [la.det(eval_at(A, x)) for x in xs]
    return _newton_to_monomial(xs, ys).trimmed()


def minor_gcd_invariant_factors(P: PolyMat) -> tuple:
    """Invariant factors from ``d_i = gcd(all i x i minors)``; an oracle
    independent of the elimination (combinatorial, small sizes only)."""
    facs = []
    prev = SPoly.const(1)
    for size in range(1, min(P.m, P.n) + 1):
        g = None
        for rows in itertools.combinations(range(P.m), size):
            sub = P.select_rows(rows)
            for cols in itertools.combinations(range(P.n), size):
                d = det_poly(sub.select_columns(cols))
                if d.is_zero():
                    continue
                g = d.trimmed() if g is None else spoly_gcd(g, d)
                if g.degree == 0:
                    g = g.monic()
        if g is None:
            break
        g = g.monic()
        facs.append((g // prev).monic())
        prev = g
    return tuple(facs)


def local_expansion(P: PolyMat, lam) -> list:
    return P.taylor(lam)


def rank_profile_multiplicities(P: PolyMat, lam, rank: int | None = None) -> list[int]:
    """Partial multiplicities at ``lam`` from ranks of the lower block
    Toeplitz matrices built on the Taylor coefficients at ``lam``.

    ``#{l_i >= j} = (j r - rank T_j) - ((j-1) r - rank T_{j-1})``.
    """
    r = normal_rank(P) if rank is None else rank
    m, n = P.m, P.n
    tay = P.taylor(lam)
    zero = la.zeros(m, n)
    counts = []
    prev_def = 0
    j = 0
    while True:
        j += 1
        blocks = []
        for bi in range(j):
            row = [tay[bi - bj] if 0 <= bi - bj < len(tay) else zero for bj in range(j)]
            blocks.extend(la.hstack([b for b in row], m))
        rk = la.rank(blocks, j * n)
        deficit = j * r - rk
        c = deficit - prev_def
        if c <= 0:
            break
        counts.append(c)
        prev_def = deficit
        if j > (P.grade + 1) * max(r, 1) + 1:
            raise RuntimeError("rank profile failed to stabilise")
    # counts[j-1] = #{l_i >= j}
    mults = []
    for j, c in enumerate(counts, start=1):
        nxt = counts[j] if j < len(counts) else 0
        mults += [j] * (c - nxt)
    return sorted(mults)


# --------------------------------------------------------- multiplicities

def _order_at(p: SPoly, lam: Fraction) -> int:
    lin = SPoly((-lam, 1))
    e = 0
    while p.degree > 0:
        q, r = p.divrem(lin)
        if not r.is_zero():
            break
        p = q
        e += 1
    return e


def partial_multiplicities_at(P: PolyMat, lam) -> list[int]:
    lam = rat(lam)
    facs = smith_form(P).invariant_factors
    return sorted(e for e in (_order_at(d, lam) for d in facs) if e > 0)


def infinite_multiplicities(P: PolyMat) -> list[int]:
    return partial_multiplicities_at(reversal(P, P.grade), 0)


def regrade_infinite_multiplicities(mults: Sequence[int], rank: int, shift: int) -> list[int]:
    """Infinite partial multiplicities after raising the grade by ``shift``:
    every one of the ``rank`` slots grows by ``shift`` (zeros included)."""
    if shift < 0:
        raise ValueError("grade may only be raised")
    padded = [0] * (rank - len(mults)) + sorted(mults)
    return sorted(x + shift for x in padded if x + shift > 0)


# ----------------------------------------------------------- minimal bases

@dataclass(frozen=True)
class MinimalBasis:
    basis: PolyMat
    indices: tuple

    @property
    def p(self) -> int:
        return self.basis.n


@dataclass(frozen=True)
class ForneyResult:
    ok: bool
    full_rank_everywhere: bool
    high_order_full_rank: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _conv_matrix(P: PolyMat, d: int) -> la.Matrix:
    """Coefficient map ``x_0..x_d -> (P x)_0..(P x)_{k+d}``."""
    m, n, k = P.m, P.n, P.grade
    zero = la.zeros(m, n)
    rows = []
    for s in range(k + d + 1):
        blocks = [P.coeffs[s - t] if 0 <= s - t <= k else zero for t in range(d + 1)]
        rows.extend(la.hstack(blocks, m))
    return tuple(rows)


def _shift(vec: Sequence, n: int, by: int, length: int) -> list:
    out = [Fraction(0)] * (length * n)
    out[by * n: by * n + len(vec)] = vec
    return out


def _vec_to_column(vec: Sequence, n: int, deg: int) -> PolyMat:
    coeffs = [tuple((vec[t * n + i],) for i in range(n)) for t in range(deg + 1)]
    return PolyMat(n, 1, deg, coeffs)


def _normalize_top(vec: list, n: int, deg: int) -> list:
    top = vec[deg * n:(deg + 1) * n]
    lead = next(x for x in top if x)
    return [x / lead for x in vec]


def minimal_basis(P: PolyMat, rank: int | None = None) -> MinimalBasis:
    """Right minimal basis by a degree sweep over convolution nullspaces."""
    r = normal_rank(P) if rank is None else rank
    n = P.n
    p = n - r
    if p == 0:
        return MinimalBasis(PolyMat.zero(n, 0, 0), ())
    picks: list[tuple[int, list]] = []  # (degree, flat coeffs lowest first)
    cap = P.grade * r
    d = 0
    while len(picks) < p:
        if d > cap:
            raise MinimalBasisError(f"degree sweep passed the bound {cap}")
        length = d + 1
        span = la.SpanBuilder(length * n)
        for deg, vec in picks:
            for s in range(d - deg + 1):
                span.add(_shift(vec, n, s, length))
        ker = la.nullspace(_conv_matrix(P, d), length * n)
        for cand in ker:
            if span.add(cand):
                picks.append((d, _normalize_top(list(cand), n, d)))
                if len(picks) == p:
                    break
        d += 1
    cols = [_vec_to_column(vec, n, deg) for deg, vec in picks]
    from .polymat import hstack
    B = hstack(cols)
    mb = MinimalBasis(B, tuple(sorted(deg for deg, _ in picks)))
    res = is_minimal_basis(B)
    if not res:
        raise MinimalBasisError(f"degree sweep produced a non-minimal basis: {res.reason}")
    return mb


def is_minimal_basis(A: PolyMat, tries: int = 6) -> ForneyResult:
    """Forney criterion: full column rank at every finite point and a
    full-rank high-order coefficient matrix."""
    n, p = A.m, A.n
    if p > n:
        raise ValueError("a basis cannot have more columns than rows")
    if p == 0:
        return ForneyResult(True, True, True)
    degs = A.column_degrees()
    if any(dg == NEG_INF for dg in degs):
        return ForneyResult(False, False, False, "zero column")
    hi_ok = la.rank(high_order_coefficient(A), p) == p
    fin_ok = _full_rank_everywhere(A, tries)
    reason = []
    if not fin_ok:
        reason.append("rank drop at a finite point")
    if not hi_ok:
        reason.append("high-order coefficient matrix is rank deficient")
    return ForneyResult(fin_ok and hi_ok, fin_ok, hi_ok, "; ".join(reason))


def _full_rank_everywhere(A: PolyMat, tries: int) -> bool:
    n, p = A.m, A.n
    if normal_rank(A) < p:
        return False
    g = None
    got = 0
    seen = set()
    for lam in probe_points(4 * tries):
        ev = eval_at(A, lam)
        if la.rank(ev, p) < p:
            continue
        rows = tuple(la.pivot_columns(la.transpose(ev, p), n))
        if rows in seen:
            continue
        seen.add(rows)
        d = det_poly(A.select_rows(rows))
        g = d if g is None else spoly_gcd(g, d)
        if g.degree == 0:
            return True
        got += 1
        if got >= tries:
            break
    facs = smith_form(A).invariant_factors
    return len(facs) == p and all(f.degree == 0 for f in facs)


# --------------------------------------------------------- eigenstructure

def _fmt(x: Fraction) -> str:
    return str(x)


@dataclass
class Eigenstructure:
    finite_eigs: dict
    inf_mults: list
    right_minimal_indices: list
    left_minimal_indices: list
    rank: int
    grade: int
    unresolved_degree: int = 0
    invariant_factors: tuple = field(default=(), repr=False, compare=False)

    @property
    def partial(self) -> bool:
        return self.unresolved_degree > 0

    def index_sum(self) -> int:
        return (sum(sum(v) for v in self.finite_eigs.values()) + self.unresolved_degree
                + sum(self.inf_mults) + sum(self.right_minimal_indices)
                + sum(self.left_minimal_indices))

    def same_structure(self, other: "Eigenstructure") -> bool:
        return (self.finite_eigs == other.finite_eigs and self.inf_mults == other.inf_mults
                and self.right_minimal_indices == other.right_minimal_indices
                and self.left_minimal_indices == other.left_minimal_indices)

    def to_json(self) -> dict:
        out = {
            "finite": {_fmt(k): v for k, v in sorted(self.finite_eigs.items())},
            "inf": list(self.inf_mults),
            "right": list(self.right_minimal_indices),
            "left": list(self.left_minimal_indices),
            "rank": self.rank,
            "grade": self.grade,
        }
        out["warning"] = (f"irrational eigenvalues unresolved (degree {self.unresolved_degree})"
                          if self.partial else None)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Eigenstructure":
        return cls(
            {Fraction(k): sorted(v) for k, v in data.get("finite", {}).items()},
            sorted(data.get("inf", [])), sorted(data.get("right", [])),
            sorted(data.get("left", [])), data.get("rank", 0), data.get("grade", 0),
        )


def full_eigenstructure(P: PolyMat, candidate_eigs: Iterable | None = None) -> Eigenstructure:
    r = normal_rank(P)
    facs = smith_form(P).invariant_factors
    if len(facs) != r:
        raise IndexSumViolation(f"Smith rank {len(facs)} differs from normal rank {r}")
    finite: dict = {}
    unresolved = 0
    if facs:
        last = facs[-1]
        roots = rational_roots(last) if last.degree > 0 else []
        found = sum(mult for _, mult in roots)
        unresolved = last.degree - found if last.degree > 0 else 0
        lams = {lam for lam, _ in roots}
        for c in candidate_eigs or ():
            lams.add(rat(c))
        for lam in sorted(lams):
            mults = sorted(e for e in (_order_at(d, lam) for d in facs) if e > 0)
            if mults:
                finite[lam] = mults
        # total finite multiplicity = sum of invariant factor degrees
        unresolved = sum(d.degree for d in facs) - sum(sum(v) for v in finite.values())
    if unresolved:
        warnings.warn(f"{unresolved} finite eigenvalue(s), counted with multiplicity, are "
                      "not rational; structure reported as partial",
                      IrrationalEigenvaluesPresent, stacklevel=2)
    inf = infinite_multiplicities(P)
    right = list(minimal_basis(P, r).indices)
    left = list(minimal_basis(P.transpose(), r).indices)
    E = Eigenstructure(finite, inf, right, left, r, P.grade, unresolved, facs)
    check_index_sum(E)
    return E


def check_index_sum(E: Eigenstructure) -> None:
    INDEX_SUM_AUDIT["checked"] += 1
    total = E.index_sum()
    if total != E.grade * E.rank:
        INDEX_SUM_AUDIT["failed"] += 1
        raise IndexSumViolation(f"index sum {total} != grade*rank = {E.grade * E.rank}")
