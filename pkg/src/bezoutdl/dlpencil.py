"""DL(P, v) pencils built from the Bezoutian, and the structure around them.

The pencil is read off, block by block, from the bivariate quotient

    [P(y)(x - z)v(x) - P(x)(y - z)v(y)] / (x - y)

whose coefficient of ``y^(k-1-i) x^(k-1-j)`` is block ``(i, j)`` of ``L``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .eigenstructure import (Eigenstructure, MinimalBasis, full_eigenstructure,
                             is_minimal_basis, smith_form)
from .exactalg import NEG_INF, SPoly, hermite_basis, rat, rational_roots, spoly_gcd
from .polymat import (PolyMat, eval_at, hstack, kron, vandermonde_at,
                      vandermonde_vector)


class BezoutRemainderError(AssertionError):
    """The Bezout numerator was not divisible by (x - y)."""


class DLInvariantError(AssertionError):
    """A structural identity of the constructed pencil failed."""


class ExclusionViolation(ValueError):
    """Roots of v meet the spectrum of P."""


class IrrationalRootsError(ValueError):
    """An operation needed the roots of a polynomial and they are not rational."""


class ExclusionWarning(UserWarning):
    pass


# ------------------------------------------------------------------ ansatz

@dataclass(frozen=True)
class Ansatz:
    """``v(x) = omega^T V(x)``; ``omega[0]`` multiplies ``x^(k-1)``."""

    v: SPoly
    omega: tuple

    def __post_init__(self):
        k = len(self.omega)
        if k == 0 or self.v.grade != k - 1:
            raise ValueError("ansatz grade must be k-1 with k = len(omega)")
        if tuple(reversed(self.v.coeffs)) != self.omega:
            raise ValueError("omega and v disagree")
        if self.v.is_zero():
            raise ValueError("the ansatz polynomial must be nonzero")

    @classmethod
    def from_omega(cls, omega: Sequence) -> "Ansatz":
        om = tuple(rat(x) for x in omega)
        return cls(SPoly(reversed(om), len(om) - 1), om)

    @classmethod
    def from_poly(cls, v: SPoly, k: int | None = None) -> "Ansatz":
        g = v.grade if k is None else k - 1
        v = v.regrade(g)
        return cls(v, tuple(reversed(v.coeffs)))

    @classmethod
    def from_roots(cls, roots: Sequence, k: int, lead=1) -> "Ansatz":
        return cls.from_poly(SPoly.from_roots(roots, lead), k)

    @property
    def k(self) -> int:
        return len(self.omega)

    @property
    def inf_root_multiplicity(self) -> int:
        return self.v.inf_root_multiplicity()

    def finite_roots(self) -> list[tuple[Fraction, int]]:
        """Rational roots with multiplicity; raises if some root is not rational."""
        if self.v.degree <= 0:
            return []
        roots = rational_roots(self.v)
        if sum(mult for _, mult in roots) != self.v.degree:
            raise IrrationalRootsError(f"v = {self.v} has non-rational roots")
        return roots


# ------------------------------------------------------------- Bezoutian

def _poly_grid(k: int, m: int, n: int):
    return [[[[Fraction(0)] * n for _ in range(m)] for _ in range(k + 2)] for _ in range(k + 2)]


def _bezout_numerator(P: PolyMat, v: SPoly):
    """Numerator split by powers of z: ``N0 - z N1`` where
    ``N0 = x v(x) P(y) - y v(y) P(x)`` and ``N1 = v(x) P(y) - v(y) P(x)``.
    Grids are indexed ``[power of y][power of x]``."""
    k, m, n = P.grade, P.m, P.n
    N0 = _poly_grid(k, m, n)
    N1 = _poly_grid(k, m, n)
    for a, va in enumerate(v.coeffs):
        if not va:
            continue
        for b, Pb in enumerate(P.coeffs):
            for r in range(m):
                for s in range(n):
                    x = va * Pb[r][s]
                    if not x:
                        continue
                    # v(x) P(y) terms: x^a y^b ; v(y) P(x) terms: y^a x^b
                    N0[b][a + 1][r][s] += x
                    N0[a + 1][b][r][s] -= x
                    N1[b][a][r][s] += x
                    N1[a][b][r][s] -= x
    return N0, N1


def _divide_by_x_minus_y(N, m: int, n: int):
    """Synthetic division in x by ``x - y``. Returns the quotient grid and
    whether the remainder vanished."""
    size = len(N)
    ny = size
    # columns c_j(y) = sum_i N[i][j] y^i ; q_{j-1} = c_j + y q_j
    q = [None] * size
    carry = [[[Fraction(0)] * n for _ in range(m)] for _ in range(ny + 1)]
    for j in range(size - 1, -1, -1):
        col = [[[N[i][j][r][s] if i < size else Fraction(0) for s in range(n)] for r in range(m)]
               for i in range(ny + 1)]
        shifted = [[[Fraction(0)] * n for _ in range(m)]] + carry[:-1]
        cur = [[[col[i][r][s] + shifted[i][r][s] for s in range(n)] for r in range(m)]
               for i in range(ny + 1)]
        if j == 0:
            rem_zero = not any(x for blk in cur for row in blk for x in row)
            return q, rem_zero
        q[j - 1] = cur
        carry = cur
    return q, True


def _quotient_to_block(q0, q1, k: int, m: int, n: int):
    """Blocks of L0, L1 from quotient grids ``q[power of x][power of y]``."""
    rows0 = [[Fraction(0)] * (k * n) for _ in range(k * m)]
    rows1 = [[Fraction(0)] * (k * n) for _ in range(k * m)]
    for px in range(len(q0)):
        if q0[px] is None:
            continue
        for py in range(len(q0[px])):
            b0, b1 = q0[px][py], q1[px][py]
            if not any(x for row in b0 for x in row) and not any(x for row in b1 for x in row):
                continue
            if px > k - 1 or py > k - 1:
                raise BezoutRemainderError("quotient exceeds the expected bidegree")
            bi, bj = k - 1 - py, k - 1 - px
            for r in range(m):
                for s in range(n):
                    rows0[bi * m + r][bj * n + s] = b0[r][s]
                    rows1[bi * m + r][bj * n + s] = -b1[r][s]
    return rows0, rows1


@dataclass(frozen=True)
class DLPencil:
    L: PolyMat
    k: int
    ansatz: Ansatz
    P: PolyMat

    @property
    def m(self) -> int:
        return self.P.m

    @property
    def n(self) -> int:
        return self.P.n


def bezoutian_blocks(P: PolyMat, v: SPoly):
    """``(L0, L1)`` with ``L(z) = L0 + z L1``; raises if (x - y) does not
    divide the numerator or the quotient is not symmetric in (x, y)."""
    k, m, n = P.grade, P.m, P.n
    N0, N1 = _bezout_numerator(P, v)
    q0, ok0 = _divide_by_x_minus_y(N0, m, n)
    q1, ok1 = _divide_by_x_minus_y(N1, m, n)
    if not (ok0 and ok1):
        raise BezoutRemainderError("Bezout numerator not divisible by (x - y)")
    for q in (q0, q1):
        for px in range(len(q)):
            if q[px] is None:
                continue
            for py in range(len(q[px])):
                other = q[py][px] if py < len(q) and q[py] is not None and px < len(q[py]) else None
                mine = q[px][py]
                if other is None:
                    if any(x for row in mine for x in row):
                        raise DLInvariantError("Bezoutian is not symmetric in x and y")
                elif mine != other:
                    raise DLInvariantError("Bezoutian is not symmetric in x and y")
    return _quotient_to_block(q0, q1, k, m, n)


def build_dl(P: PolyMat, v: Ansatz, check: bool = True) -> DLPencil:
    k = P.grade
    if k < 2:
        raise ValueError("DL(P, v) needs grade k >= 2")
    if v.k != k:
        raise ValueError(f"ansatz has grade {v.k - 1}, expected {k - 1}")
    L0, L1 = bezoutian_blocks(P, v.v)
    L = PolyMat(k * P.m, k * P.n, 1, [L0, L1])
    pencil = DLPencil(L, k, v, P)
    if check:
        check_contractions(pencil)
    return pencil


def check_contractions(pencil: DLPencil) -> None:
    """``(V^T (x) I_m) L = omega^T (x) P`` and ``L (V (x) I_n) = omega (x) P``."""
    P, L, k = pencil.P, pencil.L, pencil.k
    V = vandermonde_vector(k)
    om = PolyMat.constant([list(pencil.ansatz.omega)])
    left = kron(V.transpose(), PolyMat.identity(P.m)) @ L
    right = L @ kron(V, PolyMat.identity(P.n))
    if not left.equal_as_polynomial(kron(om, P)):
        raise DLInvariantError("(V^T x I) L != omega^T x P")
    if not right.equal_as_polynomial(kron(om.transpose(), P)):
        raise DLInvariantError("L (V x I) != omega x P")


# ---------------------------------------------------------------- exclusion

def exclusion_holds(P: PolyMat, v: Ansatz, eig: Eigenstructure | None = None) -> bool:
    """Roots of v (with infinity) avoid the eigenvalues of P (with infinity).

    The finite part is decided by ``gcd(v, d_r) = 1`` so irrational roots
    are handled exactly too.
    """
    facs = smith_form(P).invariant_factors
    if facs and facs[-1].degree > 0 and v.v.degree > 0:
        if spoly_gcd(v.v, facs[-1]).degree > 0:
            return False
    if v.inf_root_multiplicity > 0:
        inf = eig.inf_mults if eig is not None else None
        if inf is None:
            from .eigenstructure import infinite_multiplicities
            inf = infinite_multiplicities(P)
        if inf:
            return False
    return True


def require_exclusion(P: PolyMat, v: Ansatz) -> None:
    if not exclusion_holds(P, v):
        raise ExclusionViolation("roots of v meet the spectrum of P")


# ------------------------------------------------------ confluent Vandermonde

def confluent_vandermonde_W(nodes, k: int) -> la.Matrix:
    """Normalized confluent Vandermonde matrix.

    ``nodes`` is either an SPoly ``w`` of degree ``k`` with rational roots or
    an explicit list of ``(mu, ell)``; columns are ``V^(j)(mu)/j!``.
    """
    if isinstance(nodes, SPoly):
        if nodes.degree != k:
            raise ValueError(f"w must have degree {k}")
        pts = rational_roots(nodes)
        if sum(e for _, e in pts) != k:
            raise IrrationalRootsError(f"w = {nodes} has non-rational roots")
    else:
        pts = [(rat(mu), int(e)) for mu, e in nodes]
        if sum(e for _, e in pts) != k:
            raise ValueError("multiplicities must add up to k")
    cols = []
    for mu, ell in pts:
        for j in range(ell):
            cols.append(vandermonde_at(k, mu, j, normalized=True))
    return la.transpose(cols, k)


@dataclass(frozen=True)
class BlockEvaluation:
    W: la.Matrix
    nodes: tuple          # ((mu_i, ell_i), ...) with mu0 first
    Q: tuple              # constant blocks, one per node
    c: tuple
    congruence: la.Matrix  # (W^T x I) L(mu0) (W x I)


class BlockEvaluationError(AssertionError):
    pass


def block_evaluation(LP: DLPencil, P: PolyMat, mu0) -> BlockEvaluation:
    mu0 = rat(mu0)
    k, m, n = LP.k, P.m, P.n
    v = LP.ansatz
    if v.inf_root_multiplicity:
        raise ValueError("v has a root at infinity; move it with a Mobius map first")
    roots = v.finite_roots()
    if any(mu == mu0 for mu, _ in roots):
        raise ValueError(f"mu0 = {mu0} is a root of v")
    nodes = ((mu0, 1),) + tuple(roots)
    W = confluent_vandermonde_W(nodes, k)
    w = SPoly((-mu0, 1)) * v.v
    Wm = kron(PolyMat.constant(W), PolyMat.identity(m)).coeffs[0]
    Wn = kron(PolyMat.constant(W), PolyMat.identity(n)).coeffs[0]
    G = la.matmul(la.matmul(la.transpose(Wm), eval_at(LP.L, mu0)), Wn)
    Qs, cs = [], []
    r0 = 0
    for mu, ell in nodes:
        # off-diagonal node blocks vanish
        for rr in range(r0 * m, (r0 + ell) * m):
            for cc in range(k * n):
                if not (r0 * n <= cc < (r0 + ell) * n) and G[rr][cc]:
                    raise BlockEvaluationError(f"coupling between node {mu} and another node")
        Q = la.submatrix(G, range(r0 * m, (r0 + ell) * m), range(r0 * n, (r0 + ell) * n))
        ci = w.derivative(ell)(mu) / math.factorial(ell)
        if not ci:
            raise BlockEvaluationError(f"c at node {mu} vanished")
        Pm = eval_at(P, mu)
        for b in range(ell):
            for a in range(ell):
                blk = la.submatrix(Q, range(b * m, (b + 1) * m), range(a * n, (a + 1) * n))
                if a + b < ell - 1 and not la.is_zero(blk):
                    raise BlockEvaluationError(f"Q at node {mu} is not block antitriangular")
                if a + b == ell - 1 and blk != la.scale(Pm, ci):
                    raise BlockEvaluationError(f"antidiagonal block at node {mu} is not c*P(mu)")
        Qs.append(Q)
        cs.append(ci)
        r0 += ell
    return BlockEvaluation(W, nodes, tuple(Qs), tuple(cs), G)


def reconstruct_from_blocks(be: BlockEvaluation, m: int, n: int) -> la.Matrix:
    """Undo the congruence: ``(W^-T x I)(direct sum Q)(W^-1 x I)``."""
    k = len(be.W)
    Wi = la.inverse(be.W)
    big = [[Fraction(0)] * (k * n) for _ in range(k * m)]
    r0 = 0
    for (mu, ell), Q in zip(be.nodes, be.Q):
        for i in range(ell * m):
            for j in range(ell * n):
                big[r0 * m + i][r0 * n + j] = Q[i][j]
        r0 += ell
    left = kron(PolyMat.constant(la.transpose(Wi)), PolyMat.identity(m)).coeffs[0]
    right = kron(PolyMat.constant(Wi), PolyMat.identity(n)).coeffs[0]
    return la.matmul(la.matmul(left, big), right)


# ----------------------------------------------------- structured basis F(z)

@dataclass(frozen=True)
class StructuredBasis:
    C: la.Matrix
    Dz: PolyMat
    Ez: PolyMat
    F: PolyMat
    hermite: tuple
    p: int
    k: int

    def column_degrees(self) -> list:
        return self.F.column_degrees()


class StructuredBasisError(AssertionError):
    pass


def _pencil_kills(L: PolyMat, X: PolyMat) -> bool:
    return (L @ X).is_zero()


def structured_minimal_basis(LP: DLPencil, P: PolyMat, M: MinimalBasis,
                             check_exclusion: bool = True) -> StructuredBasis:
    k, n = LP.k, P.n
    v = LP.ansatz
    p = M.p
    if v.inf_root_multiplicity:
        raise ValueError("v has a root at infinity; move it with a Mobius map first")
    roots = v.finite_roots()
    if check_exclusion:
        require_exclusion(P, v)
    kn = k * n
    if p == 0:
        empty = PolyMat.zero(kn, 0, 0)
        return StructuredBasis((), empty, empty, empty, (), 0, k)
    D = kron(vandermonde_vector(k), M.basis)
    Cs = []
    for mu, ell in roots:
        for a in range(ell):
            Cs.append(eval_at(D.derivative(a), mu))
    H = hermite_basis(roots)
    C = la.hstack(Cs, kn)
    E = D
    for h, Ci in zip(H, Cs):
        E = E - PolyMat.constant(Ci).spoly_scale(h)
    # E / v, entrywise and exact
    ents = []
    for i in range(E.m):
        row = []
        for j in range(E.n):
            q, r = E.entry(i, j).divrem(v.v)
            if not r.is_zero():
                raise StructuredBasisError("v does not divide E(z)")
            row.append(q)
        ents.append(row)
    Ev = PolyMat.from_entries(ents, ncols=p)
    F = hstack([PolyMat.constant(C, ncols=len(Cs) * p), Ev]) if Cs else Ev
    sb = StructuredBasis(C, D, E, F, tuple(H), p, k)
    _check_structured(LP, M, sb)
    return sb


def _check_structured(LP: DLPencil, M: MinimalBasis, sb: StructuredBasis) -> None:
    k, p = sb.k, sb.p
    ncol_c = (k - 1) * p
    if ncol_c:
        if la.rank(sb.C, ncol_c) != ncol_c:
            raise StructuredBasisError("C is not of full column rank")
        if not _pencil_kills(LP.L, PolyMat.constant(sb.C, ncols=ncol_c)):
            raise StructuredBasisError("L C != 0")
    if not _pencil_kills(LP.L, sb.F):
        raise StructuredBasisError("L F != 0")
    res = is_minimal_basis(sb.F)
    if not res:
        raise StructuredBasisError(f"F fails the Forney criterion: {res.reason}")
    want = [0] * ncol_c + list(M.basis.column_degrees())
    if sb.F.column_degrees() != want:
        raise StructuredBasisError(f"column degrees {sb.F.column_degrees()} != {want}")


# ----------------------------------------------------------- arrowhead

def arrowhead_pencil(P: PolyMat, mus: Sequence, mu0, check: bool = True) -> PolyMat:
    """Block-arrowhead pencil strictly equivalent to DL(P, v) with
    ``v = prod (z - mu_i)`` (simple roots)."""
    k, m, n = P.grade, P.m, P.n
    mus = [rat(x) for x in mus]
    mu0 = rat(mu0)
    if len(mus) != k - 1:
        raise ValueError(f"need k-1 = {k - 1} roots")
    if len(set(mus)) != len(mus) or mu0 in mus:
        raise ValueError("nodes must be pairwise distinct")
    v = SPoly.from_roots(mus, 1, k - 1)
    dv = v.derivative()
    nodes = [mu0] + mus
    Pv = [eval_at(P, x) for x in nodes]
    dP0 = eval_at(P.derivative(), mu0)
    Z = la.zeros(m, n)
    A0 = [[Z] * k for _ in range(k)]
    A1 = [[Z] * k for _ in range(k)]
    A0[0][0] = la.scale(Pv[0], v(mu0))
    A1[0][0] = la.sub(la.scale(dP0, v(mu0)), la.scale(Pv[0], dv(mu0)))
    for i in range(1, k):
        mu = nodes[i]
        A0[i][i] = la.scale(Pv[i], (mu - mu0) * dv(mu))
        A1[i][i] = la.scale(Pv[i], -dv(mu))
        border = la.scale(Pv[i], v(mu0) / (mu - mu0))
        A1[0][i] = border
        A1[i][0] = border
    def assemble(blocks):
        rows = []
        for bi in range(k):
            rows.extend(la.hstack(blocks[bi], m))
        return tuple(rows)
    M0, M1 = assemble(A0), assemble(A1)
    const = la.sub(M0, la.scale(M1, mu0))
    A = PolyMat(k * m, k * n, 1, [const, M1])
    if check:
        L = build_dl(P, Ansatz.from_poly(v, k)).L
        W = la.transpose([vandermonde_at(k, x) for x in nodes], k)
        Wm = PolyMat.constant(kron(PolyMat.constant(W), PolyMat.identity(m)).coeffs[0])
        Wn = PolyMat.constant(kron(PolyMat.constant(W), PolyMat.identity(n)).coeffs[0])
        if not (Wm.transpose() @ L @ Wn).equal_as_polynomial(A):
            raise DLInvariantError("arrowhead pencil is not congruent to DL(P, v)")
    return A


def dl_eigenstructure(LP: DLPencil) -> Eigenstructure:
    return full_eigenstructure(LP.L)


def warn_if_excluded(P: PolyMat, v: Ansatz) -> bool:
    ok = exclusion_holds(P, v)
    if not ok:
        warnings.warn("eigenvalue exclusion fails for this (P, v)", ExclusionWarning, stacklevel=2)
    return ok


__all__ = [
    "Ansatz", "DLPencil", "build_dl", "bezoutian_blocks", "check_contractions",
    "exclusion_holds", "require_exclusion", "confluent_vandermonde_W",
    "BlockEvaluation", "block_evaluation", "reconstruct_from_blocks",
    "StructuredBasis", "structured_minimal_basis", "arrowhead_pencil",
    "BezoutRemainderError", "DLInvariantError", "ExclusionViolation",
    "IrrationalRootsError", "BlockEvaluationError", "StructuredBasisError",
    "NEG_INF", "dl_eigenstructure", "warn_if_excluded",
]
