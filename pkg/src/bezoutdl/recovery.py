"""Recovering data of P from DL(P, v) through ``Omega = omega^T (x) I_n``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .dlpencil import DLPencil, StructuredBasis, require_exclusion, structured_minimal_basis
from .eigenstructure import MinimalBasis, MinimalBasisError, is_minimal_basis, minimal_basis
from .exactalg import NEG_INF, rat
from .polymat import PolyMat, eval_at, hstack, normal_rank
from .rootpoly import RootPoly, RootPolySet, check_root_poly, classify_set


class RecoveryError(AssertionError):
    pass


@dataclass(frozen=True)
class OmegaMap:
    omega: tuple
    n: int

    @classmethod
    def of(cls, LP: DLPencil) -> "OmegaMap":
        return cls(LP.ansatz.omega, LP.n)

    @property
    def k(self) -> int:
        return len(self.omega)

    def matrix(self) -> la.Matrix:
        n = self.n
        return tuple(
            tuple(self.omega[j // n] if j % n == i else Fraction(0) for j in range(self.k * n))
            for i in range(n)
        )

    def apply(self, X: PolyMat) -> PolyMat:
        if X.m != self.k * self.n:
            raise ValueError(f"expected {self.k * self.n} rows, got {X.m}")
        return PolyMat.constant(self.matrix()) @ X

    def apply_vector(self, u: Sequence) -> tuple:
        n = self.n
        return tuple(sum((self.omega[b] * rat(u[b * n + i]) for b in range(self.k)), Fraction(0))
                     for i in range(n))


def recover_minimal_basis(N: MinimalBasis, omega: OmegaMap, P: PolyMat | None = None) -> MinimalBasis:
    """Right minimal basis of P from one of L: keep the nonconstant columns of
    ``Omega N`` and a maximal independent subset of the constant ones."""
    if N.p == 0:
        return MinimalBasis(PolyMat.zero(omega.n, 0, 0), ())
    Mh = omega.apply(N.basis)
    degs = Mh.column_degrees()
    dyn = [j for j, d in enumerate(degs) if d != NEG_INF and d > 0]
    const = [j for j, d in enumerate(degs) if d == NEG_INF or d == 0]
    cols = [Mh.select_columns(dyn)] if dyn else []
    if const:
        Mc = Mh.select_columns(const).coeffs[0]
        piv = la.pivot_columns(Mc, len(const))
        if piv:
            cols.append(PolyMat.constant(la.submatrix(Mc, range(omega.n), piv), ncols=len(piv)))
    if not cols:
        raise RecoveryError("recovered basis is empty")
    B = hstack(cols) if len(cols) > 1 else cols[0]
    B = B.trimmed() if B.degree != NEG_INF else B
    res = is_minimal_basis(B)
    if not res:
        raise RecoveryError(f"recovered basis fails the Forney criterion: {res.reason}")
    if P is not None:
        if not (P @ B).is_zero():
            raise RecoveryError("P times the recovered basis is nonzero")
        if B.n != P.n - normal_rank(P):
            raise RecoveryError("recovered basis has the wrong number of columns")
    return MinimalBasis(B, tuple(sorted(B.column_degrees())))


def kernel_of_omega(LP: DLPencil, P: PolyMat, M: MinimalBasis,
                    sb: StructuredBasis | None = None) -> la.Matrix:
    """Constant basis ``C`` of ``ker Omega`` inside ``ker L(z)``."""
    require_exclusion(P, LP.ansatz)
    sb = structured_minimal_basis(LP, P, M) if sb is None else sb
    k, p, n = LP.k, M.p, P.n
    C = sb.C
    ncol = (k - 1) * p
    if ncol == 0:
        return ()
    om = OmegaMap.of(LP)
    if not la.is_zero(la.matmul(om.matrix(), C, k * n, ncol)):
        raise RecoveryError("Omega C != 0")
    if la.rank(C, ncol) != ncol:
        raise RecoveryError("C is rank deficient")
    return C


def omega_kernel_dimension(N: MinimalBasis, omega: OmegaMap) -> int:
    """Dimension over Q(z) of ``ker Omega`` restricted to ``span N``."""
    if N.p == 0:
        return 0
    return N.p - normal_rank(omega.apply(N.basis))


def recover_eigenvector(LP: DLPencil, lam, u: Sequence) -> tuple:
    lam = rat(lam)
    if LP.ansatz.v(lam) == 0:
        raise ValueError(f"v vanishes at {lam}")
    Lv = eval_at(LP.L, lam)
    uu = tuple(rat(x) for x in u)
    if any(sum((a * b for a, b in zip(row, uu)), Fraction(0)) for row in Lv):
        raise ValueError("u is not in ker L(lam)")
    h = OmegaMap.of(LP).apply_vector(uu)
    Pv = eval_at(LP.P, lam)
    if any(sum((a * b for a, b in zip(row, h)), Fraction(0)) for row in Pv):
        raise RecoveryError("recovered vector is not in ker P(lam)")
    return h


def quotient_dimensions(LP: DLPencil, lam) -> tuple[int, int]:
    """``dim ker P(lam) - dim ker_lam P`` and the same for ``L``; equal under
    exclusion."""
    lam = rat(lam)
    P, L, k = LP.P, LP.L, LP.k
    p = P.n - normal_rank(P)
    kp = L.n - normal_rank(L)
    dp = (P.n - la.rank(eval_at(P, lam), P.n)) - p
    dl = (L.n - la.rank(eval_at(L, lam), L.n)) - kp
    return dp, dl


def recover_root_polys(rset: RootPolySet, omega: OmegaMap, P: PolyMat,
                       M: MinimalBasis | None = None) -> RootPolySet:
    M = minimal_basis(P) if M is None else M
    out = []
    for rp in rset.members:
        r = omega.apply(rp.vec)
        r = r.trimmed() if r.degree != NEG_INF else r
        chk = check_root_poly(P, M, r, rp.lam)
        if not chk:
            raise RecoveryError(f"recovered vector is not a root polynomial: {chk.reason}")
        if chk.order != rp.order:
            raise RecoveryError(f"order changed from {rp.order} to {chk.order}")
        out.append(RootPoly(r, rp.lam, chk.order))
    res = classify_set(P, M, out, rset.lam)
    if rset.maximal and not res.maximal:
        raise RecoveryError("maximality lost in recovery")
    return res


def transposed(LP: DLPencil) -> DLPencil:
    """DL(P, v)^T = DL(P^T, v); left-side recovery goes through this."""
    return DLPencil(LP.L.transpose(), LP.k, LP.ansatz, LP.P.transpose())


def recover_left_minimal_basis(N_left: MinimalBasis, LP: DLPencil) -> MinimalBasis:
    T = transposed(LP)
    return recover_minimal_basis(N_left, OmegaMap.of(T), T.P)


def recover_P(L: PolyMat, omega: Sequence, m: int, n: int) -> PolyMat:
    """P from ``(V^T (x) I_m) L = omega^T (x) P``, read at any block with
    ``omega_j != 0``."""
    from .polymat import kron, vandermonde_vector
    om = [rat(x) for x in omega]
    k = len(om)
    if L.shape != (k * m, k * n):
        raise ValueError("pencil size does not match k, m, n")
    j = next((i for i, x in enumerate(om) if x), None)
    if j is None:
        raise ValueError("omega is zero")
    left = kron(vandermonde_vector(k).transpose(), PolyMat.identity(m)) @ L
    return left.select_columns(range(j * n, (j + 1) * n)).scale(1 / om[j]).regrade(k)


__all__ = [
    "OmegaMap", "recover_minimal_basis", "kernel_of_omega", "omega_kernel_dimension",
    "recover_eigenvector", "quotient_dimensions", "recover_root_polys", "transposed",
    "recover_left_minimal_basis", "recover_P", "RecoveryError", "MinimalBasisError",
]
