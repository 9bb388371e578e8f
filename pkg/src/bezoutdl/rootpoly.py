"""Root polynomials at finite eigenvalues.

Local computations use ``s = z - lam``: a vector polynomial ``x(s)`` of
order at least ``l`` satisfies ``sum_{a+b=j} P~_a x_b = 0`` for ``j < l``
where ``P~`` are the Taylor coefficients of ``P`` at ``lam``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from . import linalg as la
from .eigenstructure import MinimalBasis, minimal_basis, partial_multiplicities_at
from .exactalg import NEG_INF, SPoly, rat
from .polymat import PolyMat, eval_at, kron, vandermonde_vector


class RootPolyError(ValueError):
    pass


@dataclass(frozen=True)
class RootPoly:
    vec: PolyMat
    lam: Fraction
    order: int


@dataclass(frozen=True)
class RootCheck:
    ok: bool
    order: int
    failed_condition: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _order_of_vector(w: PolyMat, lam: Fraction) -> int | None:
    """Largest ``e`` with ``(z - lam)^e`` dividing every entry; None for 0."""
    if w.is_zero():
        return None
    tay = w.taylor(lam)
    for e, c in enumerate(tay):
        if not la.is_zero(c):
            return e
    return None


def _kernel_span_at(M: MinimalBasis, lam: Fraction) -> list[tuple]:
    if M.p == 0:
        return []
    ev = eval_at(M.basis, lam)
    return [la.column(ev, j) for j in range(M.p)]


def check_root_poly(P: PolyMat, M: MinimalBasis, r: PolyMat, lam) -> RootCheck:
    lam = rat(lam)
    if r.shape != (P.n, 1):
        raise ValueError(f"root polynomial must be {P.n}x1")
    Pr = P @ r
    order = _order_of_vector(Pr, lam)
    if order is None:
        # a polynomial kernel vector always takes values in ker_lam P(z)
        return RootCheck(False, 0, 2, "r lies in ker P(z), so r(lam) is in ker_lam P(z)")
    if order == 0:
        return RootCheck(False, 0, 1, "P(lam) r(lam) != 0")
    r0 = la.column(eval_at(r, lam), 0)
    span = _kernel_span_at(M, lam)
    if la.in_span(span, r0, P.n):
        return RootCheck(False, order, 2, "r(lam) lies in ker_lam P(z)")
    return RootCheck(True, order)


@dataclass(frozen=True)
class RootPolySet:
    members: tuple
    lam: Fraction
    lambda_independent: bool
    complete: bool
    maximal: bool
    orders: tuple = field(default=())


def _values_at(members: Sequence[RootPoly], lam) -> list[tuple]:
    return [la.column(eval_at(rp.vec, lam), 0) for rp in members]


def classify_set(P: PolyMat, M: MinimalBasis, members: Sequence[RootPoly], lam=None) -> RootPolySet:
    members = sorted(members, key=lambda rp: -rp.order)
    lams = {rp.lam for rp in members}
    if len(lams) > 1:
        raise RootPolyError("root polynomials at different eigenvalues")
    lam = rat(lam) if lam is not None else (members[0].lam if members else None)
    if lam is None:
        raise RootPolyError("empty set needs an explicit lambda")
    if lams and lam not in lams:
        raise RootPolyError("lambda does not match the members")
    for rp in members:
        chk = check_root_poly(P, M, rp.vec, lam)
        if not chk or chk.order != rp.order:
            raise RootPolyError(f"member is not a root polynomial of order {rp.order}: {chk.reason}")
    n = P.n
    cols = _kernel_span_at(M, lam) + _values_at(members, lam)
    indep = la.rank(la.transpose(cols, n), len(cols)) == len(cols) if cols else True
    t = (n - la.rank(eval_at(P, lam), n)) - M.p
    complete = indep and len(members) == t
    pm = partial_multiplicities_at(P, lam)
    maximal = complete and sum(rp.order for rp in members) == sum(pm)
    return RootPolySet(tuple(members), lam, indep, complete, maximal,
                       tuple(rp.order for rp in members))


def _local_system(P: PolyMat, lam: Fraction, ell: int) -> la.Matrix:
    tay = P.taylor(lam)
    zero = la.zeros(P.m, P.n)
    rows = []
    for j in range(ell):
        blocks = [tay[j - b] if 0 <= j - b < len(tay) else zero for b in range(ell)]
        rows.extend(la.hstack(blocks, P.m))
    return tuple(rows)


def _local_to_poly(x: Sequence, n: int, ell: int, lam: Fraction) -> PolyMat:
    """``sum_b x_b (z - lam)^b`` in powers of z."""
    coeffs = []
    for e in range(ell):
        coeffs.append(tuple(
            (sum((x[b * n + i] * comb(b, e) * (-lam) ** (b - e) for b in range(e, ell)), Fraction(0)),)
            for i in range(n)
        ))
    return PolyMat(n, 1, max(ell - 1, 0), coeffs)


def local_head_space(P: PolyMat, lam: Fraction, ell: int) -> list[tuple]:
    """Values ``x(lam)`` of all local solutions of order >= ``ell``."""
    n = P.n
    ker = la.nullspace(_local_system(P, lam, ell), ell * n)
    return [tuple(v[:n]) for v in ker]


def maximal_set(P: PolyMat, lam, M: MinimalBasis | None = None) -> RootPolySet:
    lam = rat(lam)
    n = P.n
    M = minimal_basis(P) if M is None else M
    pm = sorted(partial_multiplicities_at(P, lam), reverse=True)
    if not pm:
        raise RootPolyError(f"{lam} is not an eigenvalue")
    span = la.SpanBuilder(n)
    for v in _kernel_span_at(M, lam):
        span.add(v)
    members = []
    for ell in pm:
        ker = la.nullspace(_local_system(P, lam, ell), ell * n)
        pick = None
        for x in ker:
            if span.add(x[:n]):
                pick = x
                break
        if pick is None:
            raise RootPolyError(f"no root polynomial of order {ell} extends the set")
        vec = _local_to_poly(pick, n, ell, lam).trimmed()
        chk = check_root_poly(P, M, vec, lam)
        if not chk or chk.order != ell:
            raise RootPolyError(f"greedy pick has order {chk.order}, expected {ell}")
        members.append(RootPoly(vec, lam, ell))
    out = classify_set(P, M, members, lam)
    if not out.maximal:
        raise RootPolyError("greedy construction is not maximal")
    return out


def maximal_by_orders(P: PolyMat, rset: RootPolySet) -> bool:
    return rset.complete and sorted(rset.orders) == partial_multiplicities_at(P, rset.lam)


def maximal_by_probe(P: PolyMat, M: MinimalBasis, rset: RootPolySet) -> bool:
    """Definition check: no member can be swapped for a root polynomial of
    higher order that keeps the prefix lambda-independent."""
    if not rset.complete:
        return False
    n = P.n
    lam = rset.lam
    base = _kernel_span_at(M, lam)
    prev: list[tuple] = []
    for rp in rset.members:
        heads = local_head_space(P, lam, rp.order + 1)
        span = la.SpanBuilder(n)
        for v in base + prev:
            span.add(v)
        if any(not span.contains(h) for h in heads):
            return False
        prev.append(la.column(eval_at(rp.vec, lam), 0))
    return True


def lift_root_polys(rset: RootPolySet, P: PolyMat, LP, L_basis: MinimalBasis | None = None,
                    check: bool = True) -> RootPolySet:
    """``rho = V(z) (x) r(z)`` for every member; checked against ``L``."""
    from .dlpencil import require_exclusion
    k = LP.k
    require_exclusion(P, LP.ansatz)
    V = vandermonde_vector(k)
    lifted = [RootPoly(kron(V, rp.vec), rp.lam, rp.order) for rp in rset.members]
    if not check:
        return RootPolySet(tuple(lifted), rset.lam, rset.lambda_independent, rset.complete,
                           rset.maximal, rset.orders)
    N = minimal_basis(LP.L) if L_basis is None else L_basis
    for rp in lifted:
        chk = check_root_poly(LP.L, N, rp.vec, rp.lam)
        if not chk or chk.order != rp.order:
            raise RootPolyError(f"lifted vector fails as a root polynomial of L: {chk.reason}")
    out = classify_set(LP.L, N, lifted, rset.lam)
    if out.maximal != rset.maximal:
        raise RootPolyError("lifting changed maximality")
    return out


__all__ = [
    "RootPoly", "RootCheck", "RootPolySet", "check_root_poly", "classify_set",
    "maximal_set", "maximal_by_orders", "maximal_by_probe", "local_head_space",
    "lift_root_polys", "RootPolyError", "NEG_INF", "SPoly",
]
